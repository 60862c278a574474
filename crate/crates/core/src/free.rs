//! The free-algebra functor, materialized up to a term-size bound.

use std::convert::Infallible;

use crate::engine::{Countermodel, Engine, Proof, Verdict};
use crate::enumerate::enumerate_terms;
use crate::term::{name, Equation, Name, Substitution, Term, TermOrder};

/// Canonical representatives of the free algebra over `vars`, among terms
/// of size at most `bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeCarrier {
    pub vars: Vec<Name>,
    pub bound: usize,
    /// Sorted in canonical order; each is its own normal form.
    pub elements: Vec<Term>,
    /// Some pair of elements could not be separated or identified within
    /// budget; they were kept apart.
    pub uncertain: bool,
}

impl FreeCarrier {
    pub fn order(&self) -> TermOrder {
        TermOrder::new(&self.vars)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, t: &Term) -> bool {
        self.elements.contains(t)
    }
}

/// Enumerates terms over `vars` up to `bound` and keeps one representative
/// per provable-equality class.
///
/// With no variables the carrier holds the closed terms, which is empty
/// unless the signature has a constant.
pub fn free_algebra(e: &Engine, vars: &[Name], bound: usize) -> FreeCarrier {
    let order = TermOrder::new(vars);
    let exact = e.normalizer_kind().is_some();
    let mut elements: Vec<Term> = Vec::new();
    let mut uncertain = false;
    let mut seen = std::collections::HashSet::new();
    for t in enumerate_terms(e.theory().signature(), vars, bound) {
        let nf = e.normalize_in(&t, &order);
        if exact {
            // The normal form may be larger than the bound, as with inv(x·x·x) in groups.
            if seen.insert(nf.clone()) {
                elements.push(nf);
            }
            continue;
        }
        if nf != t {
            // A smaller equivalent term was enumerated earlier.
            continue;
        }
        {
            let mut duplicate = false;
            for k in &elements {
                match e.decide(&Equation::new(t.clone(), k.clone())) {
                    Verdict::Proved(_) => {
                        duplicate = true;
                        break;
                    }
                    Verdict::Refuted(_) => {}
                    Verdict::Unknown(_) => uncertain = true,
                }
            }
            if duplicate {
                continue;
            }
        }
        elements.push(t);
    }
    FreeCarrier {
        vars: vars.to_vec(),
        bound,
        elements,
        uncertain,
    }
}

/// The action of the functor on a map `φ: X → Y`, given as a substitution
/// of variables by variables: substitute, then normalize over `Y`.
pub fn functor_map(e: &Engine, phi: &Substitution, t: &Term, target: &[Name]) -> Term {
    e.normalize_in(&t.substitute(phi), &TermOrder::new(target))
}

/// Why a theory is not idempotent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdempotencyFailure {
    pub symbol: usize,
    pub equation: Equation,
    pub countermodel: Countermodel,
}

/// For each symbol, the equation `f(x,...,x) = x` with its derivation.
pub type IdempotencyProof = Vec<(Equation, Proof)>;

/// Whether every basic operation satisfies `f(x,...,x) ≈ x`. Constants
/// count as operations with no arguments.
pub fn is_idempotent(e: &Engine) -> Verdict<IdempotencyProof, IdempotencyFailure> {
    let x = Term::Var(name("x"));
    let mut proofs = Vec::new();
    let mut open = 0;
    for (f, sym) in e.theory().signature().symbols().iter().enumerate() {
        let eq = Equation::new(Term::app(f, vec![x.clone(); sym.arity]), x.clone());
        match e.decide(&eq) {
            Verdict::Proved(p) => proofs.push((eq, p)),
            Verdict::Refuted(countermodel) => {
                return Verdict::Refuted(IdempotencyFailure {
                    symbol: f,
                    equation: eq,
                    countermodel,
                })
            }
            Verdict::Unknown(_) => open += 1,
        }
    }
    if open > 0 {
        Verdict::Unknown(crate::engine::Unknown::Open { unresolved: open })
    } else {
        Verdict::Proved(proofs)
    }
}

/// Whether the functor fixes the one-generator algebra: its bounded
/// carrier over `{x}` is exactly `{x}`.
pub fn one_generator_is_trivial(e: &Engine, bound: usize) -> Verdict<(), Infallible> {
    let c = free_algebra(e, &[name("x")], bound);
    if c.elements == [Term::var("x")] && !c.uncertain {
        Verdict::Proved(())
    } else {
        Verdict::Unknown(crate::engine::Unknown::NoWitness { bound })
    }
}
