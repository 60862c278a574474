//! Mal'cev terms, Hagemann–Mitschke chains and quaternary kernel-pair
//! witnesses.
//!
//! Ternary terms are written over `x, y, z`, quaternary ones over
//! `x, y, z, u`. `m` is a Mal'cev term when `m(x,y,y) ≈ x` and
//! `m(x,x,y) ≈ y`. A chain `p1, ..., p(n-1)` satisfies `x ≈ p1(x,y,y)`,
//! `pi(x,x,y) ≈ p(i+1)(x,y,y)` and `p(n-1)(x,x,y) ≈ y`.

use thiserror::Error;

use crate::engine::{Engine, Unknown, Verdict};
use crate::enumerate::enumerate_terms;
use crate::finset::{all_maps, check_weak_preservation, kernel_pair};
use crate::term::{name, names, Equation, Name, Substitution, Term, TermOrder};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MalcevError {
    #[error("p(x,x,y) = q(x,y,y) is not provable within budget")]
    Incompatible,
    #[error("not a Mal'cev term within budget")]
    NotMalcev,
    #[error("a chain needs n >= {min}, got n = {n}")]
    ChainTooShort { n: usize, min: usize },
    #[error("chain equation {index} is not provable within budget")]
    InvalidChain { index: usize },
}

pub fn ternary_vars() -> Vec<Name> {
    names(&["x", "y", "z"])
}

pub fn quaternary_vars() -> Vec<Name> {
    names(&["x", "y", "z", "u"])
}

fn v(s: &str) -> Term {
    Term::var(s)
}

/// `t(a, b, c)` for a ternary `t`.
pub fn apply3(t: &Term, a: &Term, b: &Term, c: &Term) -> Term {
    t.substitute(&Substitution::from_pairs([
        (name("x"), a.clone()),
        (name("y"), b.clone()),
        (name("z"), c.clone()),
    ]))
}

/// `s(a, b, c, d)` for a quaternary `s`.
pub fn apply4(s: &Term, a: &Term, b: &Term, c: &Term, d: &Term) -> Term {
    s.substitute(&Substitution::from_pairs([
        (name("x"), a.clone()),
        (name("y"), b.clone()),
        (name("z"), c.clone()),
        (name("u"), d.clone()),
    ]))
}

/// Whether the engine proves `lhs = rhs`, trying normal forms first.
fn holds(e: &Engine, lhs: &Term, rhs: &Term) -> bool {
    let order = TermOrder::new(&quaternary_vars());
    if e.normalize_in(lhs, &order) == e.normalize_in(rhs, &order) {
        return true;
    }
    if e.normalizer_kind().is_some() {
        return false;
    }
    e.decide(&Equation::new(lhs.clone(), rhs.clone())).is_proved()
}

/// The two Mal'cev equations for `m`.
pub fn malcev_equations(m: &Term) -> [Equation; 2] {
    let (x, y) = (v("x"), v("y"));
    [
        Equation::new(apply3(m, &x, &y, &y), x.clone()),
        Equation::new(apply3(m, &x, &x, &y), y),
    ]
}

pub fn is_malcev(e: &Engine, m: &Term) -> bool {
    malcev_equations(m).iter().all(|eq| holds(e, &eq.lhs, &eq.rhs))
}

/// Canonical ternary terms up to `bound` that are their own normal form.
fn representatives(e: &Engine, vars: &[Name], bound: usize) -> Vec<Term> {
    let order = TermOrder::new(vars);
    enumerate_terms(e.theory().signature(), vars, bound)
        .filter(|t| e.normalize_in(t, &order) == *t)
        .collect()
}

/// First ternary term in canonical order satisfying both Mal'cev equations.
pub fn find_malcev_term(e: &Engine, size_bound: usize) -> Option<Term> {
    enumerate_terms(e.theory().signature(), &ternary_vars(), size_bound).find(|t| is_malcev(e, t))
}

/// The equations a chain must satisfy, in order.
pub fn chain_equations(chain: &[Term]) -> Vec<Equation> {
    let (x, y) = (v("x"), v("y"));
    let mut out = Vec::new();
    if let (Some(first), Some(last)) = (chain.first(), chain.last()) {
        out.push(Equation::new(x.clone(), apply3(first, &x, &y, &y)));
        for w in chain.windows(2) {
            out.push(Equation::new(apply3(&w[0], &x, &x, &y), apply3(&w[1], &x, &y, &y)));
        }
        out.push(Equation::new(apply3(last, &x, &x, &y), y));
    }
    out
}

pub fn check_chain(e: &Engine, chain: &[Term]) -> Result<(), MalcevError> {
    for (index, eq) in chain_equations(chain).iter().enumerate() {
        if !holds(e, &eq.lhs, &eq.rhs) {
            return Err(MalcevError::InvalidChain { index });
        }
    }
    Ok(())
}

/// First chain `p1, ..., p(n-1)` in lexicographic order over tuples of
/// canonical representatives up to `size_bound`.
pub fn find_hm_chain(e: &Engine, n: usize, size_bound: usize) -> Option<Vec<Term>> {
    if n < 2 {
        return None;
    }
    if n == 2 {
        return find_malcev_term(e, size_bound).map(|m| vec![m]);
    }
    let reps = representatives(e, &ternary_vars(), size_bound);
    let (x, y) = (v("x"), v("y"));
    let mut chain = Vec::new();
    extend_chain(e, &reps, n - 1, &x, &y, &mut chain).then_some(chain)
}

fn extend_chain(e: &Engine, reps: &[Term], len: usize, x: &Term, y: &Term, chain: &mut Vec<Term>) -> bool {
    // The value the next term must take at (x, y, y).
    let need = match chain.last() {
        None => x.clone(),
        Some(prev) => apply3(prev, x, x, y),
    };
    for p in reps {
        if !holds(e, &need, &apply3(p, x, y, y)) {
            continue;
        }
        chain.push(p.clone());
        if chain.len() == len {
            if holds(e, &apply3(p, x, x, y), y) {
                return true;
            }
        } else if extend_chain(e, reps, len, x, y, chain) {
            return true;
        }
        chain.pop();
    }
    false
}

/// `p`, `q` and a quaternary `s` with `p(x,y,z) ≈ s(x,y,z,z)` and
/// `q(x,y,z) ≈ s(x,x,y,z)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelWitness {
    pub p: Term,
    pub q: Term,
    pub s: Term,
}

impl KernelWitness {
    pub fn equations(&self) -> [Equation; 2] {
        let (x, y, z) = (v("x"), v("y"), v("z"));
        [
            Equation::new(self.p.clone(), apply4(&self.s, &x, &y, &z, &z)),
            Equation::new(self.q.clone(), apply4(&self.s, &x, &x, &y, &z)),
        ]
    }

    pub fn verify(&self, e: &Engine) -> bool {
        self.equations().iter().all(|eq| holds(e, &eq.lhs, &eq.rhs))
    }
}

/// The compatibility condition `p(x,x,y) ≈ q(x,y,y)`.
pub fn compatibility_equation(p: &Term, q: &Term) -> Equation {
    let (x, y) = (v("x"), v("y"));
    Equation::new(apply3(p, &x, &x, &y), apply3(q, &x, &y, &y))
}

pub fn compatible(e: &Engine, p: &Term, q: &Term) -> bool {
    let eq = compatibility_equation(p, q);
    holds(e, &eq.lhs, &eq.rhs)
}

/// First quaternary `s` in canonical order linking `p` and `q`.
pub fn find_s(e: &Engine, p: &Term, q: &Term, size_bound: usize) -> Result<Option<KernelWitness>, MalcevError> {
    if !compatible(e, p, q) {
        return Err(MalcevError::Incompatible);
    }
    let found = enumerate_terms(e.theory().signature(), &quaternary_vars(), size_bound)
        .map(|s| KernelWitness {
            p: p.clone(),
            q: q.clone(),
            s,
        })
        .find(|w| w.verify(e));
    Ok(found)
}

/// `s(x,y,z,u) := m(p(x,y,u), p(x,x,u), q(x,z,u))`, verified.
pub fn construct_s_via_malcev(
    e: &Engine,
    m: &Term,
    p: &Term,
    q: &Term,
) -> Result<Verdict<KernelWitness, std::convert::Infallible>, MalcevError> {
    if !is_malcev(e, m) {
        return Err(MalcevError::NotMalcev);
    }
    if !compatible(e, p, q) {
        return Err(MalcevError::Incompatible);
    }
    let (x, y, z, u) = (v("x"), v("y"), v("z"), v("u"));
    let s = apply3(
        m,
        &apply3(p, &x, &y, &u),
        &apply3(p, &x, &x, &u),
        &apply3(q, &x, &z, &u),
    );
    let w = KernelWitness {
        p: p.clone(),
        q: q.clone(),
        s,
    };
    Ok(if w.verify(e) {
        Verdict::Proved(w)
    } else {
        Verdict::Unknown(Unknown::Exhausted {
            dims: vec![crate::engine::BudgetDim::Steps, crate::engine::BudgetDim::TermSize],
        })
    })
}

/// Replaces `p1, p2` by `m(x,y,z) := s(x,y,y,z)` where `s` links them.
pub fn shorten_chain(
    e: &Engine,
    chain: &[Term],
    s_bound: usize,
) -> Result<Verdict<Vec<Term>, std::convert::Infallible>, MalcevError> {
    let n = chain.len() + 1;
    if n < 3 {
        return Err(MalcevError::ChainTooShort { n, min: 3 });
    }
    check_chain(e, chain)?;
    let (p1, p2) = (&chain[0], &chain[1]);
    let mut witness = find_s(e, p1, p2, s_bound)?;
    if witness.is_none() {
        if let Some(m) = find_malcev_term(e, s_bound) {
            witness = construct_s_via_malcev(e, &m, p1, p2)?.proved().cloned();
        }
    }
    let Some(w) = witness else {
        return Ok(Verdict::Unknown(Unknown::NoWitnessForPair {
            left: e.theory().show(p1),
            right: e.theory().show(p2),
            witness_bound: s_bound,
        }));
    };
    let (x, y, z) = (v("x"), v("y"), v("z"));
    let m = apply4(&w.s, &x, &y, &y, &z);
    let m = e.normalize_in(&m, &TermOrder::new(&ternary_vars()));
    let mut shorter = vec![m];
    shorter.extend_from_slice(&chain[2..]);
    check_chain(e, &shorter)?;
    Ok(Verdict::Proved(shorter))
}

/// How weak kernel-pair preservation was established or doubted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KernelPairVerdict {
    /// A Mal'cev term exists, so kernel pairs are weakly preserved.
    ProvedByMalcevTerm(Term),
    /// Every checked kernel-pair diagram lifted, up to the stated bounds.
    ProvedUpToBound { diagrams: usize },
    /// The theory is n-permutable but has no Mal'cev term up to the bound;
    /// for such theories weak kernel-pair preservation is equivalent to
    /// having one.
    EvidenceAgainst { chain: Vec<Term> },
    /// Some compatible pair has no linking quaternary term up to the bound.
    NecessaryConditionOpen,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelPairReport {
    pub pair_bound: usize,
    pub s_bound: usize,
    pub malcev_term: Option<Term>,
    pub pairs_compatible: usize,
    pub pairs_linked: usize,
    pub open_pairs: Vec<(Term, Term)>,
    pub hm_chain: Option<Vec<Term>>,
    pub diagrams_checked: usize,
    pub diagrams_lifted: usize,
    pub verdict: KernelPairVerdict,
}

/// Base sets for the direct diagram checks.
const DIAGRAM_SETS: &[&[&str]] = &[&["a"], &["a", "b"], &["a", "b", "c"]];

/// Extra witness size allowed over the carrier bound in diagram checks.
pub const WITNESS_SLACK: usize = 4;

pub fn kernel_pair_report(e: &Engine, pair_bound: usize, s_bound: usize) -> KernelPairReport {
    let mut report = KernelPairReport {
        pair_bound,
        s_bound,
        malcev_term: find_malcev_term(e, s_bound),
        pairs_compatible: 0,
        pairs_linked: 0,
        open_pairs: Vec::new(),
        hm_chain: None,
        diagrams_checked: 0,
        diagrams_lifted: 0,
        verdict: KernelPairVerdict::Unknown,
    };
    if let Some(m) = &report.malcev_term {
        report.verdict = KernelPairVerdict::ProvedByMalcevTerm(m.clone());
        return report;
    }

    let reps = representatives(e, &ternary_vars(), pair_bound);
    for p in &reps {
        for q in &reps {
            if !compatible(e, p, q) {
                continue;
            }
            report.pairs_compatible += 1;
            match find_s(e, p, q, s_bound) {
                Ok(Some(_)) => report.pairs_linked += 1,
                _ => report.open_pairs.push((p.clone(), q.clone())),
            }
        }
    }

    report.hm_chain = (3..=4).find_map(|n| find_hm_chain(e, n, pair_bound));
    if let Some(chain) = &report.hm_chain {
        report.verdict = KernelPairVerdict::EvidenceAgainst { chain: chain.clone() };
        return report;
    }
    if !report.open_pairs.is_empty() {
        report.verdict = KernelPairVerdict::NecessaryConditionOpen;
        return report;
    }

    // Direct checks: kernel pairs of every map between small sets.
    for dom in DIAGRAM_SETS {
        for cod in DIAGRAM_SETS {
            let dom: Vec<String> = dom.iter().map(|s| s.to_string()).collect();
            let cod: Vec<String> = cod.iter().map(|s| format!("c{s}")).collect();
            for f in all_maps(&dom, &cod) {
                report.diagrams_checked += 1;
                let d = kernel_pair(&f);
                if check_weak_preservation(e, &d, pair_bound, pair_bound + WITNESS_SLACK).verdict.is_proved() {
                    report.diagrams_lifted += 1;
                }
            }
        }
    }
    report.verdict = if report.diagrams_lifted == report.diagrams_checked {
        KernelPairVerdict::ProvedUpToBound {
            diagrams: report.diagrams_checked,
        }
    } else {
        KernelPairVerdict::Unknown
    };
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{catalog_theory, Budget, NormalizerKind};
    use crate::parse::{parse_term, parse_theory};

    fn groups() -> Engine {
        Engine::new(catalog_theory(NormalizerKind::Groups), Budget::default())
    }

    #[test]
    fn malcev_theory_is_its_own_witness() {
        let th = parse_theory("signature: m/3 equations: m(x,y,y)=x  m(x,x,y)=y").unwrap();
        let e = Engine::new(th.clone(), Budget::default());
        let m = parse_term(th.signature(), "m(x,y,z)").unwrap();
        assert_eq!(find_malcev_term(&e, 4), Some(m.clone()));
        assert_eq!(find_hm_chain(&e, 2, 4), Some(vec![m]));
    }

    #[test]
    fn groups_have_a_malcev_term() {
        let g = groups();
        let m = find_malcev_term(&g, 6).expect("found");
        assert!(is_malcev(&g, &m));
        assert_eq!(m.size(), 6);
    }

    #[test]
    fn empty_theory_has_no_chain() {
        let e = Engine::new(parse_theory("signature: equations:").unwrap(), Budget::default());
        for n in 2..=4 {
            assert_eq!(find_hm_chain(&e, n, 5), None);
        }
    }

    #[test]
    fn constructed_s_for_groups() {
        let g = groups();
        let sig = g.theory().signature();
        let m = parse_term(sig, "mul(x, mul(inv(y), z))").unwrap();
        let p = parse_term(sig, "mul(z, mul(inv(y), x))").unwrap();
        let q = v("z");
        let w = construct_s_via_malcev(&g, &m, &p, &q).unwrap();
        let w = w.proved().expect("verified");
        let closed = parse_term(sig, "mul(u, mul(inv(y), x))").unwrap();
        assert!(holds(&g, &w.s, &closed));
        assert_eq!(construct_s_via_malcev(&g, &m, &p, &p), Err(MalcevError::Incompatible));
    }

    #[test]
    fn shortening() {
        let g = groups();
        let m = parse_term(g.theory().signature(), "mul(x, mul(inv(y), z))").unwrap();
        let short = shorten_chain(&g, &[m.clone(), v("z")], 6).unwrap();
        let short = short.proved().expect("shortened");
        assert_eq!(short.len(), 1);
        assert!(is_malcev(&g, &short[0]));
        assert!(matches!(shorten_chain(&g, &[m], 6), Err(MalcevError::ChainTooShort { .. })));
    }
}
