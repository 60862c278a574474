//! Exact normalizers for a few well-known presentations.
//!
//! A theory is recognized when its equations coincide with a catalog
//! presentation up to a bijection of symbols, renaming of variables and
//! orientation of each equation. Normalization then rewrites innermost
//! first with derived lemmas. Every lemma carries a derivation template
//! from the axioms, so the trace of a normalization is a plain equational
//! derivation that replays against the user's theory.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::Serialize;

use super::proof::{find_step, instantiate, match_into, Bindings, Proof};
use crate::parse::{parse_term_list, parse_theory};
use crate::term::{Equation, Name, Term, TermOrder, Theory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalizerKind {
    /// No equations: every term is its own normal form.
    Free,
    Groups,
    AbelianGroups,
    Semilattices,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Guard {
    Always,
    /// `x` and `y` are bound to atoms and `y` sorts strictly before `x`.
    Descending,
}

#[derive(Debug, Clone)]
struct Lemma {
    lhs: Term,
    chain: Proof,
    guard: Guard,
}

#[derive(Debug, Clone)]
pub(crate) struct ExactNormalizer {
    pub kind: NormalizerKind,
    lemmas: Vec<Lemma>,
    /// The inverse symbol, which makes `inv(v)` an atom for sorting.
    inverse: Option<usize>,
}

const GROUP_AXIOMS: &str = "signature: mul/2 inv/1 e/0 equations:
    mul(mul(x,y),z) = mul(x,mul(y,z))
    mul(e(),x) = x
    mul(x,e()) = x
    mul(inv(x),x) = e()
    mul(x,inv(x)) = e()";

const GROUP_LEMMAS: &[&str] = &[
    "mul(mul(x,y),z); mul(x,mul(y,z))",
    "mul(e(),x); x",
    "mul(x,e()); x",
    "mul(inv(x),x); e()",
    "mul(x,inv(x)); e()",
    "mul(inv(x),mul(x,y)); mul(mul(inv(x),x),y); mul(e(),y); y",
    "mul(x,mul(inv(x),y)); mul(mul(x,inv(x)),y); mul(e(),y); y",
    "inv(e()); mul(inv(e()),e()); e()",
    "inv(inv(x)); mul(inv(inv(x)),e()); mul(inv(inv(x)),mul(inv(x),x));
     mul(mul(inv(inv(x)),inv(x)),x); mul(e(),x); x",
    "inv(mul(x,y)); mul(inv(mul(x,y)),e()); mul(inv(mul(x,y)),mul(x,inv(x)));
     mul(inv(mul(x,y)),mul(x,mul(e(),inv(x))));
     mul(inv(mul(x,y)),mul(x,mul(mul(y,inv(y)),inv(x))));
     mul(inv(mul(x,y)),mul(x,mul(y,mul(inv(y),inv(x)))));
     mul(inv(mul(x,y)),mul(mul(x,y),mul(inv(y),inv(x))));
     mul(mul(inv(mul(x,y)),mul(x,y)),mul(inv(y),inv(x)));
     mul(e(),mul(inv(y),inv(x))); mul(inv(y),inv(x))",
];

const SEMILATTICE_AXIOMS: &str = "signature: and/2 equations:
    and(and(x,y),z) = and(x,and(y,z))
    and(x,y) = and(y,x)
    and(x,x) = x";

const SEMILATTICE_LEMMAS: &[&str] = &[
    "and(and(x,y),z); and(x,and(y,z))",
    "and(x,x); x",
    "and(x,and(x,y)); and(and(x,x),y); and(x,y)",
];

fn commutation_lemmas(op: &str) -> [String; 2] {
    [
        format!("{op}(x,y); {op}(y,x)"),
        format!("{op}(x,{op}(y,z)); {op}({op}(x,y),z); {op}({op}(y,x),z); {op}(y,{op}(x,z))"),
    ]
}

struct Entry {
    kind: NormalizerKind,
    axioms: String,
    lemmas: Vec<(String, Guard)>,
    inverse: Option<&'static str>,
}

fn catalog() -> Vec<Entry> {
    let plain = |ls: &[&str]| ls.iter().map(|l| (l.to_string(), Guard::Always)).collect::<Vec<_>>();
    let mut abelian = plain(GROUP_LEMMAS);
    abelian.extend(commutation_lemmas("mul").map(|l| (l, Guard::Descending)));
    let mut semilattice = plain(SEMILATTICE_LEMMAS);
    semilattice.extend(commutation_lemmas("and").map(|l| (l, Guard::Descending)));
    vec![
        Entry {
            kind: NormalizerKind::Groups,
            axioms: GROUP_AXIOMS.to_string(),
            lemmas: plain(GROUP_LEMMAS),
            inverse: None,
        },
        Entry {
            kind: NormalizerKind::AbelianGroups,
            axioms: format!("{GROUP_AXIOMS}\n    mul(x,y) = mul(y,x)"),
            lemmas: abelian,
            inverse: Some("inv"),
        },
        Entry {
            kind: NormalizerKind::Semilattices,
            axioms: SEMILATTICE_AXIOMS.to_string(),
            lemmas: semilattice,
            inverse: None,
        },
    ]
}

/// Equation fingerprint invariant under variable renaming and orientation,
/// with symbols translated through `map`.
fn equation_key(eq: &Equation, map: &[usize]) -> String {
    fn render(t: &Term, map: &[usize], vars: &mut HashMap<Name, usize>, out: &mut String) {
        match t {
            Term::Var(v) => {
                let n = vars.len();
                let i = *vars.entry(v.clone()).or_insert(n);
                let _ = write!(out, "v{i}");
            }
            Term::App(f, args) => {
                let _ = write!(out, "f{}(", map[*f]);
                for a in args {
                    render(a, map, vars, out);
                    out.push(',');
                }
                out.push(')');
            }
        }
    }
    let one = |l: &Term, r: &Term| {
        let mut vars = HashMap::new();
        let mut s = String::new();
        render(l, map, &mut vars, &mut s);
        s.push('=');
        render(r, map, &mut vars, &mut s);
        s
    };
    one(&eq.lhs, &eq.rhs).min(one(&eq.rhs, &eq.lhs))
}

fn key_set(th: &Theory, map: &[usize]) -> BTreeSet<String> {
    th.equations()
        .iter()
        .filter(|e| e.lhs != e.rhs)
        .map(|e| equation_key(e, map))
        .collect()
}

/// Arity-preserving bijections from catalog symbols onto theory symbols.
fn bijections(from: &[usize], to: &[usize]) -> Vec<Vec<usize>> {
    fn go(from: &[usize], to: &[usize], used: &mut Vec<bool>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let i = cur.len();
        if i == from.len() {
            out.push(cur.clone());
            return;
        }
        for j in 0..to.len() {
            if !used[j] && to[j] == from[i] {
                used[j] = true;
                cur.push(j);
                go(from, to, used, cur, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    if from.len() == to.len() {
        go(from, to, &mut vec![false; to.len()], &mut Vec::new(), &mut out);
    }
    out
}

fn rename_symbols(t: &Term, map: &[usize]) -> Term {
    match t {
        Term::Var(_) => t.clone(),
        Term::App(f, args) => Term::App(map[*f], args.iter().map(|a| rename_symbols(a, map)).collect()),
    }
}

impl ExactNormalizer {
    /// Recognizes `th` against the catalog.
    pub fn detect(th: &Theory) -> Option<ExactNormalizer> {
        if th.equations().iter().all(|e| e.lhs == e.rhs) {
            return Some(ExactNormalizer {
                kind: NormalizerKind::Free,
                lemmas: Vec::new(),
                inverse: None,
            });
        }
        let arities: Vec<usize> = th.signature().symbols().iter().map(|s| s.arity).collect();
        let identity: Vec<usize> = (0..arities.len()).collect();
        let target = key_set(th, &identity);
        for entry in catalog() {
            let cat = parse_theory(&entry.axioms).expect("catalog axioms parse");
            let cat_arities: Vec<usize> = cat.signature().symbols().iter().map(|s| s.arity).collect();
            for map in bijections(&cat_arities, &arities) {
                if key_set(&cat, &map) == target {
                    return Self::build(th, &cat, &entry, &map);
                }
            }
        }
        None
    }

    fn build(th: &Theory, cat: &Theory, entry: &Entry, map: &[usize]) -> Option<ExactNormalizer> {
        let mut lemmas = Vec::new();
        for (text, guard) in &entry.lemmas {
            let terms: Vec<Term> = parse_term_list(cat.signature(), text)
                .expect("catalog lemma parses")
                .iter()
                .map(|t| rename_symbols(t, map))
                .collect();
            let mut steps = Vec::new();
            for w in terms.windows(2) {
                match find_step(th, &w[0], &w[1]) {
                    Some(s) => steps.push(s),
                    None => {
                        debug_assert!(false, "catalog lemma step does not follow from the axioms: {text}");
                        return None;
                    }
                }
            }
            lemmas.push(Lemma {
                lhs: terms[0].clone(),
                chain: Proof { terms, steps },
                guard: *guard,
            });
        }
        let inverse = entry
            .inverse
            .map(|s| map[cat.signature().lookup(s).expect("catalog symbol")]);
        Some(ExactNormalizer {
            kind: entry.kind,
            lemmas,
            inverse,
        })
    }

    fn atom<'t>(&self, t: &'t Term) -> Option<(&'t Name, bool)> {
        match t {
            Term::Var(v) => Some((v, false)),
            Term::App(f, args) if Some(*f) == self.inverse => match &args[0] {
                Term::Var(v) => Some((v, true)),
                _ => None,
            },
            _ => None,
        }
    }

    fn guard_holds(&self, guard: Guard, b: &Bindings, order: &TermOrder) -> bool {
        match guard {
            Guard::Always => true,
            Guard::Descending => {
                let get = |v: &str| b.iter().find(|(w, _)| &**w == v).map(|(_, t)| t);
                let (Some(x), Some(y)) = (get("x"), get("y")) else {
                    return false;
                };
                match (self.atom(x), self.atom(y)) {
                    (Some((xv, xp)), Some((yv, yp))) => {
                        order.compare_vars(yv, xv).then(yp.cmp(&xp)) == Ordering::Less
                    }
                    _ => false,
                }
            }
        }
    }

    /// Innermost, leftmost redex.
    fn redex(&self, t: &Term, path: &mut Vec<usize>, order: &TermOrder) -> Option<(Vec<usize>, usize, Bindings)> {
        if let Term::App(_, args) = t {
            for (i, a) in args.iter().enumerate() {
                path.push(i);
                let found = self.redex(a, path, order);
                path.pop();
                if found.is_some() {
                    return found;
                }
            }
        }
        for (k, lemma) in self.lemmas.iter().enumerate() {
            let mut b = Bindings::new();
            if match_into(&lemma.lhs, t, &mut b) && self.guard_holds(lemma.guard, &b, order) {
                return Some((path.clone(), k, b));
            }
        }
        None
    }

    /// Exact normal form of `t` with a derivation from `t` to it.
    pub fn normalize(&self, t: &Term, order: &TermOrder) -> Proof {
        let mut proof = Proof::reflexivity(t.clone());
        loop {
            let cur = proof.last().clone();
            let Some((path, k, b)) = self.redex(&cur, &mut Vec::new(), order) else {
                return proof;
            };
            let chain = &self.lemmas[k].chain;
            let terms = chain
                .terms
                .iter()
                .map(|s| cur.replace_at(&path, instantiate(s, &b)))
                .collect();
            let steps = chain.steps.iter().map(|s| s.shifted(&path)).collect();
            proof = proof.then(Proof { terms, steps });
        }
    }
}

/// The theory text of a catalog presentation, for examples and tests.
pub fn catalog_theory(kind: NormalizerKind) -> Theory {
    let text = match kind {
        NormalizerKind::Free => "signature: equations:".to_string(),
        NormalizerKind::Groups => GROUP_AXIOMS.to_string(),
        NormalizerKind::AbelianGroups => format!("{GROUP_AXIOMS}\n    mul(x,y) = mul(y,x)"),
        NormalizerKind::Semilattices => SEMILATTICE_AXIOMS.to_string(),
    };
    parse_theory(&text).expect("catalog axioms parse")
}
