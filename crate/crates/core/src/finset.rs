//! Finite sets and maps between them, computed elementwise: pullbacks,
//! kernel pairs, classifying preimages and weak-pullback checks, plus the
//! lift of a concrete diagram through the free-algebra functor.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{Engine, Unknown, Verdict};
use crate::enumerate::enumerate_terms;
use crate::free::{free_algebra, FreeCarrier};
use crate::term::{name, Equation, Name, Substitution, Term, TermOrder};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FinSetError {
    #[error("label `{0}` occurs twice")]
    DuplicateLabel(String),
    #[error("label `{0}` is not in the set")]
    UnknownLabel(String),
    #[error("`{0}` has no image")]
    NotTotal(String),
    #[error("graph has {found} entries for a domain of {expected}")]
    GraphShape { expected: usize, found: usize },
    #[error("graph value {0} is outside the codomain")]
    OutOfRange(usize),
    #[error("the maps have different codomains")]
    CodomainMismatch,
    #[error("the cone does not commute")]
    NotCommuting,
    #[error("map is not surjective, so it has no section")]
    NotSurjective,
    #[error("the given map is not a section")]
    NotSection,
    #[error("diagram file: {0}")]
    Format(String),
}

/// A total function between finite sets of string labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FinSetMap {
    dom: Vec<String>,
    cod: Vec<String>,
    graph: Vec<usize>,
}

fn check_labels(labels: &[String]) -> Result<(), FinSetError> {
    let mut seen = HashSet::new();
    for l in labels {
        if !seen.insert(l) {
            return Err(FinSetError::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

fn labels<S: AsRef<str>>(xs: &[S]) -> Vec<String> {
    xs.iter().map(|s| s.as_ref().to_string()).collect()
}

impl FinSetMap {
    pub fn new(dom: Vec<String>, cod: Vec<String>, graph: Vec<usize>) -> Result<Self, FinSetError> {
        check_labels(&dom)?;
        check_labels(&cod)?;
        if graph.len() != dom.len() {
            return Err(FinSetError::GraphShape {
                expected: dom.len(),
                found: graph.len(),
            });
        }
        if let Some(&v) = graph.iter().find(|&&v| v >= cod.len()) {
            return Err(FinSetError::OutOfRange(v));
        }
        Ok(FinSetMap { dom, cod, graph })
    }

    /// Builds a map from `(argument, image)` label pairs.
    pub fn from_pairs<S: AsRef<str>>(dom: &[S], cod: &[S], pairs: &[(S, S)]) -> Result<Self, FinSetError> {
        let dom = labels(dom);
        let cod = labels(cod);
        let mut table = HashMap::new();
        for (a, b) in pairs {
            let (a, b) = (a.as_ref(), b.as_ref());
            let i = dom
                .iter()
                .position(|l| l == a)
                .ok_or_else(|| FinSetError::UnknownLabel(a.to_string()))?;
            let j = cod
                .iter()
                .position(|l| l == b)
                .ok_or_else(|| FinSetError::UnknownLabel(b.to_string()))?;
            table.insert(i, j);
        }
        let graph = (0..dom.len())
            .map(|i| table.get(&i).copied().ok_or_else(|| FinSetError::NotTotal(dom[i].clone())))
            .collect::<Result<Vec<_>, _>>()?;
        FinSetMap::new(dom, cod, graph)
    }

    pub fn identity<S: AsRef<str>>(set: &[S]) -> Result<Self, FinSetError> {
        let set = labels(set);
        let graph = (0..set.len()).collect();
        FinSetMap::new(set.clone(), set, graph)
    }

    pub fn dom(&self) -> &[String] {
        &self.dom
    }

    pub fn cod(&self) -> &[String] {
        &self.cod
    }

    pub fn graph(&self) -> &[usize] {
        &self.graph
    }

    pub fn apply(&self, i: usize) -> usize {
        self.graph[i]
    }

    pub fn image_of(&self, label: &str) -> Option<&str> {
        let i = self.dom.iter().position(|l| l == label)?;
        Some(&self.cod[self.graph[i]])
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &FinSetMap) -> Result<FinSetMap, FinSetError> {
        if first.cod != self.dom {
            return Err(FinSetError::CodomainMismatch);
        }
        let graph = first.graph.iter().map(|&j| self.graph[j]).collect();
        FinSetMap::new(first.dom.clone(), self.cod.clone(), graph)
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = HashSet::new();
        self.graph.iter().all(|v| seen.insert(v))
    }

    pub fn is_surjective(&self) -> bool {
        let hit: HashSet<_> = self.graph.iter().collect();
        hit.len() == self.cod.len()
    }

    /// The section picking the least preimage of every element.
    pub fn section(&self) -> Result<FinSetMap, FinSetError> {
        let graph = (0..self.cod.len())
            .map(|c| self.graph.iter().position(|&v| v == c).ok_or(FinSetError::NotSurjective))
            .collect::<Result<Vec<_>, _>>()?;
        FinSetMap::new(self.cod.clone(), self.dom.clone(), graph)
    }

    /// Whether `self ∘ g` is the identity.
    pub fn is_section(&self, g: &FinSetMap) -> bool {
        g.dom == self.cod && g.cod == self.dom && (0..self.cod.len()).all(|c| self.graph[g.graph[c]] == c)
    }

    /// Relabels the domain and codomain as variable names, as a
    /// substitution from domain variables to codomain variables.
    pub fn as_substitution(&self) -> Substitution {
        Substitution::from_pairs(
            self.dom
                .iter()
                .zip(&self.graph)
                .map(|(a, &c)| (name(a), Term::Var(name(&self.cod[c])))),
        )
    }
}

/// A commuting square given by its apex and two legs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cone {
    pub apex: Vec<String>,
    pub q1: FinSetMap,
    pub q2: FinSetMap,
}

/// The canonical elementwise pullback of `f1` and `f2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PullbackDiagram {
    pub f1: FinSetMap,
    pub f2: FinSetMap,
    /// Index pairs `(a1, a2)` with `f1 a1 = f2 a2`, lexicographic.
    pub pairs: Vec<(usize, usize)>,
    pub p1: FinSetMap,
    pub p2: FinSetMap,
}

impl PullbackDiagram {
    /// Apex elements as label pairs.
    pub fn apex_pairs(&self) -> Vec<(&str, &str)> {
        self.pairs
            .iter()
            .map(|&(i, j)| (self.f1.dom[i].as_str(), self.f2.dom[j].as_str()))
            .collect()
    }

    pub fn apex(&self) -> &[String] {
        self.p1.dom()
    }

    pub fn cone(&self) -> Cone {
        Cone {
            apex: self.apex().to_vec(),
            q1: self.p1.clone(),
            q2: self.p2.clone(),
        }
    }
}

fn pair_label(a: &str, b: &str) -> String {
    format!("({a},{b})")
}

pub fn pullback(f1: &FinSetMap, f2: &FinSetMap) -> Result<PullbackDiagram, FinSetError> {
    if f1.cod != f2.cod {
        return Err(FinSetError::CodomainMismatch);
    }
    let pairs = compatible_pairs(f1, f2);
    let apex: Vec<String> = pairs.iter().map(|&(i, j)| pair_label(&f1.dom[i], &f2.dom[j])).collect();
    let p1 = FinSetMap::new(apex.clone(), f1.dom.clone(), pairs.iter().map(|p| p.0).collect())?;
    let p2 = FinSetMap::new(apex, f2.dom.clone(), pairs.iter().map(|p| p.1).collect())?;
    Ok(PullbackDiagram {
        f1: f1.clone(),
        f2: f2.clone(),
        pairs,
        p1,
        p2,
    })
}

pub fn kernel_pair(f: &FinSetMap) -> PullbackDiagram {
    pullback(f, f).expect("same codomain")
}

/// The preimage of `{1}` along the characteristic map of `u ⊆ a`.
pub fn classifying_preimage<S: AsRef<str>>(a: &[S], u: &[S]) -> Result<PullbackDiagram, FinSetError> {
    let a = labels(a);
    let u = labels(u);
    for l in &u {
        if !a.contains(l) {
            return Err(FinSetError::UnknownLabel(l.clone()));
        }
    }
    let two = labels(&["0", "1"]);
    let chi = FinSetMap::new(a.clone(), two.clone(), a.iter().map(|l| usize::from(u.contains(l))).collect())?;
    let one = FinSetMap::new(labels(&["1"]), two, vec![1])?;
    pullback(&chi, &one)
}

fn compatible_pairs(f1: &FinSetMap, f2: &FinSetMap) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..f1.dom.len() {
        for j in 0..f2.dom.len() {
            if f1.graph[i] == f2.graph[j] {
                out.push((i, j));
            }
        }
    }
    out
}

fn check_cone(cone: &Cone, f1: &FinSetMap, f2: &FinSetMap) -> Result<(), FinSetError> {
    if cone.q1.dom != cone.apex || cone.q2.dom != cone.apex || cone.q1.cod != f1.dom || cone.q2.cod != f2.dom {
        return Err(FinSetError::CodomainMismatch);
    }
    if f1.cod != f2.cod {
        return Err(FinSetError::CodomainMismatch);
    }
    let commutes = (0..cone.apex.len()).all(|k| f1.graph[cone.q1.graph[k]] == f2.graph[cone.q2.graph[k]]);
    if commutes {
        Ok(())
    } else {
        Err(FinSetError::NotCommuting)
    }
}

/// Whether every compatible pair is hit by some apex element.
pub fn is_weak_pullback(cone: &Cone, f1: &FinSetMap, f2: &FinSetMap) -> Result<bool, FinSetError> {
    check_cone(cone, f1, f2)?;
    let hit: HashSet<(usize, usize)> = (0..cone.apex.len())
        .map(|k| (cone.q1.graph[k], cone.q2.graph[k]))
        .collect();
    Ok(compatible_pairs(f1, f2).iter().all(|p| hit.contains(p)))
}

/// Whether every compatible pair is hit by exactly one apex element.
pub fn is_pullback(cone: &Cone, f1: &FinSetMap, f2: &FinSetMap) -> Result<bool, FinSetError> {
    check_cone(cone, f1, f2)?;
    let mut hits: HashMap<(usize, usize), usize> = HashMap::new();
    for k in 0..cone.apex.len() {
        *hits.entry((cone.q1.graph[k], cone.q2.graph[k])).or_default() += 1;
    }
    Ok(compatible_pairs(f1, f2).iter().all(|p| hits.get(p) == Some(&1)))
}

/// The weak pullback of `f1` and `f2` obtained from the kernel pair of
/// `[f1, f2]` on the disjoint union, given sections of both maps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Transport {
    /// `A1 + A2` with tagged labels.
    pub sum: Vec<String>,
    pub copair: FinSetMap,
    pub h1: FinSetMap,
    pub h2: FinSetMap,
    pub kernel: PullbackDiagram,
    pub cone: Cone,
}

pub fn weak_kernel_transport(
    f1: &FinSetMap,
    f2: &FinSetMap,
    g1: &FinSetMap,
    g2: &FinSetMap,
) -> Result<Transport, FinSetError> {
    if f1.cod != f2.cod {
        return Err(FinSetError::CodomainMismatch);
    }
    if !f1.is_section(g1) || !f2.is_section(g2) {
        return Err(FinSetError::NotSection);
    }
    let n1 = f1.dom.len();
    let sum: Vec<String> = f1
        .dom
        .iter()
        .map(|l| format!("L:{l}"))
        .chain(f2.dom.iter().map(|l| format!("R:{l}")))
        .collect();
    let copair_graph = f1.graph.iter().chain(&f2.graph).copied().collect();
    let copair = FinSetMap::new(sum.clone(), f1.cod.clone(), copair_graph)?;
    // h1 = [id, g1 ∘ f2] : A1 + A2 → A1, h2 = [g2 ∘ f1, id] : A1 + A2 → A2
    let g1f2 = g1.after(f2)?;
    let g2f1 = g2.after(f1)?;
    let h1_graph = (0..n1).chain(g1f2.graph.iter().copied()).collect();
    let h2_graph = g2f1.graph.iter().copied().chain(0..f2.dom.len()).collect();
    let h1 = FinSetMap::new(sum.clone(), f1.dom.clone(), h1_graph)?;
    let h2 = FinSetMap::new(sum.clone(), f2.dom.clone(), h2_graph)?;
    let kernel = kernel_pair(&copair);
    let cone = Cone {
        apex: kernel.apex().to_vec(),
        q1: h1.after(&kernel.p1)?,
        q2: h2.after(&kernel.p2)?,
    };
    Ok(Transport {
        sum,
        copair,
        h1,
        h2,
        kernel,
        cone,
    })
}

/// The on-disk diagram format: two maps into a common codomain, each
/// given as an object from domain labels to codomain labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramSpec {
    #[serde(rename = "A1")]
    pub a1: Vec<String>,
    #[serde(rename = "A2")]
    pub a2: Vec<String>,
    #[serde(rename = "C")]
    pub c: Vec<String>,
    pub f1: BTreeMap<String, String>,
    pub f2: BTreeMap<String, String>,
}

impl DiagramSpec {
    pub fn from_json(text: &str) -> Result<DiagramSpec, FinSetError> {
        serde_json::from_str(text).map_err(|e| FinSetError::Format(e.to_string()))
    }

    pub fn maps(&self) -> Result<(FinSetMap, FinSetMap), FinSetError> {
        let pairs = |m: &BTreeMap<String, String>| m.iter().map(|(a, b)| (a.clone(), b.clone())).collect::<Vec<_>>();
        let f1 = FinSetMap::from_pairs(&self.a1, &self.c, &pairs(&self.f1))?;
        let f2 = FinSetMap::from_pairs(&self.a2, &self.c, &pairs(&self.f2))?;
        Ok((f1, f2))
    }

    pub fn pullback(&self) -> Result<PullbackDiagram, FinSetError> {
        let (f1, f2) = self.maps()?;
        pullback(&f1, &f2)
    }
}

/// A compatible pair of elements of the lifted legs with the apex term
/// projecting onto both.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairWitness {
    pub u1: Term,
    pub u2: Term,
    pub w: Term,
}

/// What the weak-preservation check looked at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreservationReport {
    pub carrier_bound: usize,
    pub witness_bound: usize,
    pub carrier1: FreeCarrier,
    pub carrier2: FreeCarrier,
    pub witnesses: Vec<PairWitness>,
    /// Pairs whose compatibility stayed unknown; they are not required to
    /// have a witness.
    pub undecided_pairs: usize,
}

/// Result of lifting a pullback through the functor. There is no refuting
/// outcome: missing witnesses at a bound say nothing absolute.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preservation {
    pub verdict: Verdict<(), std::convert::Infallible>,
    pub report: PreservationReport,
}

fn names_of(labels: &[String]) -> Vec<Name> {
    labels.iter().map(|l| name(l)).collect()
}

/// Checks, up to the bounds, that every compatible pair `(u1, u2)` of
/// carrier elements (`F f1 u1 = F f2 u2`) lifts to some `w` over the apex
/// with `F p1 w = u1` and `F p2 w = u2`. When some pair has no witness the
/// first one in canonical order is named in the verdict.
pub fn check_weak_preservation(e: &Engine, d: &PullbackDiagram, carrier_bound: usize, witness_bound: usize) -> Preservation {
    let x1 = names_of(d.f1.dom());
    let x2 = names_of(d.f2.dom());
    let c = names_of(d.f1.cod());
    let p = names_of(d.apex());
    let carrier1 = free_algebra(e, &x1, carrier_bound);
    let carrier2 = free_algebra(e, &x2, carrier_bound);
    let (o1, o2, oc) = (TermOrder::new(&x1), TermOrder::new(&x2), TermOrder::new(&c));
    let (s1, s2) = (d.f1.as_substitution(), d.f2.as_substitution());
    let image2: Vec<Term> = carrier2
        .elements
        .iter()
        .map(|u| e.normalize_in(&u.substitute(&s2), &oc))
        .collect();

    let mut pending: Vec<(Term, Term)> = Vec::new();
    let mut undecided = 0;
    for u1 in &carrier1.elements {
        let a = e.normalize_in(&u1.substitute(&s1), &oc);
        for (u2, b) in carrier2.elements.iter().zip(&image2) {
            let compatible = if &a == b {
                true
            } else if e.normalizer_kind().is_some() {
                false
            } else {
                match e.decide(&Equation::new(a.clone(), b.clone())) {
                    Verdict::Proved(_) => true,
                    Verdict::Refuted(_) => false,
                    Verdict::Unknown(_) => {
                        undecided += 1;
                        false
                    }
                }
            };
            if compatible {
                pending.push((u1.clone(), u2.clone()));
            }
        }
    }

    let (q1, q2) = (d.p1.as_substitution(), d.p2.as_substitution());
    let mut found: HashMap<(Term, Term), Term> = HashMap::new();
    let needed: HashSet<&Term> = pending.iter().map(|(u1, _)| u1).collect();
    let wanted: HashSet<&(Term, Term)> = pending.iter().collect();
    if !pending.is_empty() {
        for w in enumerate_terms(e.theory().signature(), &p, witness_bound) {
            let a = e.normalize_in(&w.substitute(&q1), &o1);
            if !needed.contains(&a) {
                continue;
            }
            let b = e.normalize_in(&w.substitute(&q2), &o2);
            let key = (a, b);
            if !found.contains_key(&key) && wanted.contains(&key) {
                found.insert(key, w);
                if found.len() == pending.len() {
                    break;
                }
            }
        }
    }

    let mut witnesses = Vec::new();
    let mut missing = None;
    for (u1, u2) in pending {
        match found.remove(&(u1.clone(), u2.clone())) {
            Some(w) => witnesses.push(PairWitness { u1, u2, w }),
            None => {
                if missing.is_none() {
                    missing = Some((u1, u2));
                }
            }
        }
    }
    let report = PreservationReport {
        carrier_bound,
        witness_bound,
        carrier1,
        carrier2,
        witnesses,
        undecided_pairs: undecided,
    };
    let sig = e.theory().signature();
    let verdict = match missing {
        Some((u1, u2)) => Verdict::Unknown(Unknown::NoWitnessForPair {
            left: u1.display(sig).to_string(),
            right: u2.display(sig).to_string(),
            witness_bound,
        }),
        None => Verdict::Proved(()),
    };
    Preservation { verdict, report }
}

/// Every map between two label sets.
pub fn all_maps(dom: &[String], cod: &[String]) -> Vec<FinSetMap> {
    let mut out = Vec::new();
    if cod.is_empty() {
        if dom.is_empty() {
            out.push(FinSetMap::new(Vec::new(), Vec::new(), Vec::new()).expect("empty map"));
        }
        return out;
    }
    let mut digits = vec![0; dom.len()];
    loop {
        out.push(FinSetMap::new(dom.to_vec(), cod.to_vec(), digits.clone()).expect("valid graph"));
        if !crate::engine::proof::advance(&mut digits, cod.len()) {
            return out;
        }
    }
}
