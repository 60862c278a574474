//! Weak independence, independence and the derivative of a theory.
//!
//! A term `p` is weakly independent of a variable `x` when some choice of
//! the other variables among `{x, y, w1, ...}` makes `p` provably equal to
//! a term in `y` alone. It is independent of `x` when replacing `x` by a
//! fresh `y` gives a provably equal term. The derivative collects the
//! independence equations of all weakly independent occurrences; the
//! functor preserves preimages exactly when the theory proves them.

use std::collections::{HashMap, HashSet};
use std::convert::Infallible;

use thiserror::Error;

use crate::engine::proof::advance;
use crate::engine::{EqVerdict, Engine, FiniteAlgebra, Proof, Unknown, Verdict};
use crate::enumerate::enumerate_terms;
use crate::term::{fresh_name, fresh_names, name, Equation, Name, Substitution, Term, TermOrder, VarOccurrence};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DerivativeError {
    #[error("term has no variable named `{0}`")]
    NoSuchVariable(String),
}

/// `p[x, v] ≈ q(y)`: the other variables of `p` sent to `assignment`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependenceWitness {
    pub x: Name,
    pub y: Name,
    pub assignment: Vec<(Name, Term)>,
    pub instance: Term,
    pub target: Term,
    pub proof: Proof,
}

impl IndependenceWitness {
    pub fn equation(&self) -> Equation {
        Equation::new(self.instance.clone(), self.target.clone())
    }
}

pub type WeakVerdict = Verdict<IndependenceWitness, Infallible>;

/// Whether `t` is constant in every variable other than `y` in `a`.
fn depends_only_on(a: &FiniteAlgebra, t: &Term, y: &Name) -> bool {
    let vars: Vec<Name> = t.vars().into_iter().filter(|v| v != y).collect();
    if vars.is_empty() {
        return true;
    }
    let mut rho: HashMap<Name, usize> = HashMap::new();
    for y_val in 0..a.size() {
        rho.insert(y.clone(), y_val);
        let mut digits = vec![0; vars.len()];
        let mut first = None;
        loop {
            for (v, &d) in vars.iter().zip(&digits) {
                rho.insert(v.clone(), d);
            }
            let val = a.eval(t, &rho).expect("all variables assigned");
            match first {
                None => first = Some(val),
                Some(f) if f != val => return false,
                _ => {}
            }
            if !advance(&mut digits, a.size()) {
                break;
            }
        }
    }
    true
}

fn agree(a: &FiniteAlgebra, s: &Term, t: &Term) -> bool {
    let eq = Equation::new(s.clone(), t.clone());
    a.satisfies(&eq)
}

/// Searches for a witness that `p` is weakly independent of the variable
/// at `occ`. Assignments of the other variables are tried in lexicographic
/// order over the pool `[x, y, w1, ..., wn]`, targets `q` in canonical
/// order up to `q_bound`.
pub fn is_weakly_independent(e: &Engine, p: &Term, occ: &VarOccurrence, q_bound: usize) -> WeakVerdict {
    let x = occ.variable().clone();
    let mut taken: HashSet<Name> = p.vars().into_iter().collect();
    let y = fresh_name("y", &taken);
    taken.insert(y.clone());
    let others: Vec<Name> = p.vars().into_iter().filter(|v| *v != x).collect();
    let ws = fresh_names("w", others.len(), &taken);
    let pool: Vec<Term> = [x.clone(), y.clone()]
        .into_iter()
        .chain(ws)
        .map(Term::Var)
        .collect();

    let models = e.cached_models();
    let sig = e.theory().signature();
    let y_order = TermOrder::new(std::slice::from_ref(&y));
    let targets: Vec<Term> = enumerate_terms(sig, std::slice::from_ref(&y), q_bound).collect();

    let mut digits = vec![0; others.len()];
    loop {
        let assignment: Vec<(Name, Term)> = others
            .iter()
            .cloned()
            .zip(digits.iter().map(|&d| pool[d].clone()))
            .collect();
        let instance = p.substitute(&Substitution::from_pairs(assignment.iter().cloned()));
        let plausible = models.is_none_or(|ms| ms.iter().all(|a| depends_only_on(a, &instance, &y)));
        if plausible {
            let nf = e.normalizer_kind().map(|_| e.normalize_in(&instance, &y_order));
            for q in &targets {
                if let Some(nf) = &nf {
                    if e.normalize_in(q, &y_order) != *nf {
                        continue;
                    }
                } else if let Some(ms) = models {
                    if !ms.iter().all(|a| agree(a, &instance, q)) {
                        continue;
                    }
                }
                let eq = Equation::new(instance.clone(), q.clone());
                if let Verdict::Proved(proof) = e.decide(&eq) {
                    return Verdict::Proved(IndependenceWitness {
                        x,
                        y,
                        assignment,
                        instance,
                        target: q.clone(),
                        proof,
                    });
                }
            }
        }
        if !advance(&mut digits, pool.len()) {
            return Verdict::Unknown(Unknown::NoWitness { bound: q_bound });
        }
    }
}

/// `p ≈ p[x ↦ y]` with `y` fresh; every other variable stays put.
pub fn independence_equation(p: &Term, x: &Name) -> Equation {
    let taken: HashSet<Name> = p.vars().into_iter().collect();
    let y = fresh_name("y", &taken);
    let moved = p.substitute(&Substitution::from_pairs([(x.clone(), Term::Var(y))]));
    Equation::new(p.clone(), moved)
}

/// Decides whether `p` is independent of the variable at `occ`.
pub fn is_independent(e: &Engine, p: &Term, occ: &VarOccurrence) -> EqVerdict {
    e.decide(&independence_equation(p, occ.variable()))
}

/// A weakly independent occurrence with its independence verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivativeEntry {
    pub term: Term,
    pub path: Vec<usize>,
    pub witness: IndependenceWitness,
    pub equation: Equation,
    pub independence: EqVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivativeReport {
    pub scanned_bound: usize,
    pub q_bound: usize,
    pub terms_scanned: usize,
    pub occurrences_scanned: usize,
    pub entries: Vec<DerivativeEntry>,
    /// `Refuted(i)` names the first entry whose independence failed.
    pub overall: Verdict<(), usize>,
}

impl DerivativeReport {
    pub fn refuting_entry(&self) -> Option<&DerivativeEntry> {
        self.overall.refuted().map(|&i| &self.entries[i])
    }
}

/// Renames the variable occurrences of `t`, in preorder, to `names`.
fn linearize(t: &Term, names: &mut impl Iterator<Item = Name>) -> Term {
    match t {
        Term::Var(_) => Term::Var(names.next().expect("enough names")),
        Term::App(f, args) => Term::App(*f, args.iter().map(|a| linearize(a, names)).collect()),
    }
}

/// All linear terms up to `bound` (one distinct variable per position,
/// up to renaming), each with the distinguished occurrence named `x` and
/// the others `z1, z2, ...`, paired with the path to `x`. Also returns the
/// number of shapes.
fn scan_candidates(e: &Engine, bound: usize) -> (usize, Vec<(Term, Vec<usize>)>) {
    let z = name("z");
    let mut shapes = 0;
    let mut out = Vec::new();
    for shape in enumerate_terms(e.theory().signature(), std::slice::from_ref(&z), bound) {
        shapes += 1;
        let positions = shape.var_positions();
        for k in 0..positions.len() {
            let others = (1..positions.len()).map(|j| name(&format!("z{j}")));
            let mut names: Vec<Name> = others.collect();
            names.insert(k, name("x"));
            out.push((linearize(&shape, &mut names.into_iter()), positions[k].clone()));
        }
    }
    (shapes, out)
}

/// Scans every linear term up to `term_bound` and every occurrence, and
/// evaluates independence wherever weak independence is proved.
pub fn derivative_scan(e: &Engine, term_bound: usize, q_bound: usize) -> DerivativeReport {
    let (terms_scanned, candidates) = scan_candidates(e, term_bound);
    let mut entries = Vec::new();
    for (p, path) in &candidates {
        let occ = VarOccurrence::new(p.clone(), path.clone()).expect("path names a variable");
        if let Verdict::Proved(witness) = is_weakly_independent(e, p, &occ, q_bound) {
            let equation = independence_equation(p, occ.variable());
            let independence = e.decide(&equation);
            entries.push(DerivativeEntry {
                term: p.clone(),
                path: path.clone(),
                witness,
                equation,
                independence,
            });
        }
    }
    let overall = aggregate(&entries);
    DerivativeReport {
        scanned_bound: term_bound,
        q_bound,
        terms_scanned,
        occurrences_scanned: candidates.len(),
        entries,
        overall,
    }
}

fn aggregate(entries: &[DerivativeEntry]) -> Verdict<(), usize> {
    if let Some(i) = entries.iter().position(|en| en.independence.is_refuted()) {
        return Verdict::Refuted(i);
    }
    let open = entries.iter().filter(|en| !en.independence.is_proved()).count();
    if open == 0 {
        Verdict::Proved(())
    } else {
        Verdict::Unknown(Unknown::Open { unresolved: open })
    }
}

/// Drill-down for one occurrence: does weak independence imply
/// independence here?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Implication {
    pub weak: WeakVerdict,
    pub equation: Equation,
    pub independence: EqVerdict,
    /// Proved when independence holds, Refuted when weak independence holds
    /// and independence fails.
    pub verdict: Verdict<(), ()>,
}

pub fn weak_implies_independent_for(e: &Engine, p: &Term, occ: &VarOccurrence, q_bound: usize) -> Implication {
    let weak = is_weakly_independent(e, p, occ, q_bound);
    let equation = independence_equation(p, occ.variable());
    let independence = e.decide(&equation);
    let verdict = match (&weak, &independence) {
        (_, Verdict::Proved(_)) => Verdict::Proved(()),
        (Verdict::Proved(_), Verdict::Refuted(_)) => Verdict::Refuted(()),
        (Verdict::Proved(_), Verdict::Unknown(u)) => Verdict::Unknown(u.clone()),
        (Verdict::Unknown(u), _) => Verdict::Unknown(u.clone()),
        (Verdict::Refuted(never), _) => match *never {},
    };
    Implication {
        weak,
        equation,
        independence,
        verdict,
    }
}

/// The occurrence of variable `x` in `p` at its first position.
pub fn first_occurrence(p: &Term, x: &str) -> Result<VarOccurrence, DerivativeError> {
    let path = p
        .var_positions()
        .into_iter()
        .find(|pos| matches!(p.at(pos), Some(Term::Var(v)) if &**v == x))
        .ok_or_else(|| DerivativeError::NoSuchVariable(x.to_string()))?;
    Ok(VarOccurrence::new(p.clone(), path).expect("path names a variable"))
}
