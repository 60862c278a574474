//! Bounded semidecision of `Σ ⊢ s ≈ t`.
//!
//! Proofs come from a bidirectional breadth-first search over the
//! size-capped rewrite closure (or from an exact normalizer when the theory
//! is in the catalog); disproofs come from finite countermodels.

mod catalog;
pub mod model;
pub mod proof;
mod search;

use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

pub use catalog::{catalog_theory, NormalizerKind};
pub use model::{eval_term, find_models, visit_models, Countermodel, EvalError, FiniteAlgebra, ModelError};
pub use proof::{check_step, find_step, Proof, ReplayError, Step};

use catalog::ExactNormalizer;
use model::{find_models_capped, search_countermodel};
use proof::{rules_of, Rule};
use search::{connect, Closure, Outcome};

use crate::term::{Equation, Term, TermOrder, Theory};

/// Resource limits for every bounded search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub max_term_size: usize,
    /// Node expansions in proof search.
    pub max_steps: usize,
    pub max_model_size: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_term_size: 9,
            max_steps: 200_000,
            max_model_size: 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BudgetDim {
    TermSize,
    Steps,
    ModelSize,
}

/// Why a bounded search gave no answer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Unknown {
    Exhausted { dims: Vec<BudgetDim> },
    /// The exact normal forms differ, so no derivation exists, but no
    /// countermodel was found within the model-size budget.
    NotDerivable,
    /// A witness search ran to its bound without success.
    NoWitness { bound: usize },
    /// No witness over the pullback for a compatible pair.
    NoWitnessForPair {
        left: String,
        right: String,
        witness_bound: usize,
    },
    /// Some sub-verdicts stayed open.
    Open { unresolved: usize },
}

impl fmt::Display for Unknown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Unknown::Exhausted { dims } => {
                let names: Vec<&str> = dims
                    .iter()
                    .map(|d| match d {
                        BudgetDim::TermSize => "max_term_size",
                        BudgetDim::Steps => "max_steps",
                        BudgetDim::ModelSize => "max_model_size",
                    })
                    .collect();
                write!(f, "budget exhausted ({})", names.join(", "))
            }
            Unknown::NotDerivable => write!(f, "normal forms differ; no countermodel within budget"),
            Unknown::NoWitness { bound } => write!(f, "no witness up to size {bound}"),
            Unknown::NoWitnessForPair {
                left,
                right,
                witness_bound,
            } => write!(f, "no witness for ({left}, {right}) up to size {witness_bound}"),
            Unknown::Open { unresolved } => write!(f, "{unresolved} sub-verdicts unresolved"),
        }
    }
}

/// Three-valued result of a bounded semidecision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<P, R> {
    Proved(P),
    Refuted(R),
    Unknown(Unknown),
}

impl<P, R> Verdict<P, R> {
    pub fn is_proved(&self) -> bool {
        matches!(self, Verdict::Proved(_))
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown(_))
    }

    pub fn proved(&self) -> Option<&P> {
        match self {
            Verdict::Proved(p) => Some(p),
            _ => None,
        }
    }

    pub fn refuted(&self) -> Option<&R> {
        match self {
            Verdict::Refuted(r) => Some(r),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Proved(_) => "proved",
            Verdict::Refuted(_) => "refuted",
            Verdict::Unknown(_) => "unknown",
        }
    }
}

pub type EqVerdict = Verdict<Proof, Countermodel>;

// Above this many models the cached enumeration is abandoned in favour of
// query-directed countermodel search.
const MODEL_CACHE_CAP: usize = 20_000;

/// A theory with a budget, caching what can be shared between queries.
pub struct Engine {
    theory: Theory,
    budget: Budget,
    rules: Vec<Rule>,
    normalizer: Option<ExactNormalizer>,
    models: OnceLock<Option<Vec<FiniteAlgebra>>>,
}

impl fmt::Debug for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Engine")
            .field("budget", &self.budget)
            .field("normalizer", &self.normalizer_kind())
            .finish_non_exhaustive()
    }
}

impl Engine {
    pub fn new(theory: Theory, budget: Budget) -> Engine {
        Engine {
            rules: rules_of(&theory),
            normalizer: ExactNormalizer::detect(&theory),
            theory,
            budget,
            models: OnceLock::new(),
        }
    }

    /// An engine that never uses the exact-normalizer catalog.
    pub fn without_catalog(theory: Theory, budget: Budget) -> Engine {
        Engine {
            normalizer: None,
            ..Engine::new(theory, budget)
        }
    }

    pub fn theory(&self) -> &Theory {
        &self.theory
    }

    pub fn budget(&self) -> &Budget {
        &self.budget
    }

    pub fn normalizer_kind(&self) -> Option<NormalizerKind> {
        self.normalizer.as_ref().map(|n| n.kind)
    }

    fn pool(&self, eq: &Equation) -> Vec<Term> {
        let mut pool: Vec<Term> = eq.vars().into_iter().map(Term::Var).collect();
        pool.extend(self.theory.signature().constants().map(Term::constant));
        pool
    }

    /// Searches for a derivation. Never refutes.
    pub fn prove(&self, eq: &Equation) -> EqVerdict {
        if eq.lhs == eq.rhs {
            return Verdict::Proved(Proof::reflexivity(eq.lhs.clone()));
        }
        if let Some(n) = &self.normalizer {
            let order = TermOrder::by_name();
            let left = n.normalize(&eq.lhs, &order);
            let right = n.normalize(&eq.rhs, &order);
            return if left.last() == right.last() {
                Verdict::Proved(left.then(right.reversed()))
            } else {
                Verdict::Unknown(Unknown::NotDerivable)
            };
        }
        let pool = self.pool(eq);
        let max = self.budget.max_term_size;
        let start = eq.lhs.size().max(eq.rhs.size()).min(max);
        let mut steps = self.budget.max_steps;
        for cap in start..=max {
            match connect(&eq.lhs, &eq.rhs, &self.rules, &pool, cap, &mut steps) {
                Outcome::Found(p) => return Verdict::Proved(p),
                Outcome::Closed => {}
                Outcome::OutOfSteps => break,
            }
        }
        if let Some(p) = self.meet_in_normal_form(eq) {
            return Verdict::Proved(p);
        }
        let dim = if steps == 0 { BudgetDim::Steps } else { BudgetDim::TermSize };
        Verdict::Unknown(Unknown::Exhausted { dims: vec![dim] })
    }

    /// Both sides reach the same least term of their non-increasing
    /// closures. Only fully explored closures count, so the answer does not
    /// change as the step budget grows.
    fn meet_in_normal_form(&self, eq: &Equation) -> Option<Proof> {
        let order = TermOrder::by_name();
        let (left, complete_l) = self.closure_minimum(&eq.lhs, &order);
        let (right, complete_r) = self.closure_minimum(&eq.rhs, &order);
        (complete_l && complete_r && left.last() == right.last()).then(|| left.then(right.reversed()))
    }

    /// Least term reachable from `t` through terms no larger than `t`, and
    /// whether that closure was explored completely.
    fn closure_minimum(&self, t: &Term, order: &TermOrder) -> (Proof, bool) {
        let eq = Equation::new(t.clone(), t.clone());
        let pool = self.pool(&eq);
        let mut steps = self.budget.max_steps;
        let closure = Closure::explore(t, &self.rules, &pool, t.size(), &mut steps);
        let best = order.min(closure.terms()).expect("closure contains its start").clone();
        (closure.derivation_to(&best).expect("reachable"), closure.complete)
    }

    /// All models up to the model-size budget, if there are not too many.
    pub(crate) fn cached_models(&self) -> Option<&[FiniteAlgebra]> {
        self.models
            .get_or_init(|| find_models_capped(&self.theory, self.budget.max_model_size, MODEL_CACHE_CAP))
            .as_deref()
    }

    /// Searches for a finite countermodel. Never proves.
    pub fn refute(&self, eq: &Equation) -> EqVerdict {
        let exhausted = || {
            Verdict::Unknown(Unknown::Exhausted {
                dims: vec![BudgetDim::ModelSize],
            })
        };
        if eq.lhs == eq.rhs {
            return exhausted();
        }
        let found = match self.cached_models() {
            Some(models) => models.iter().find_map(|m| {
                m.falsifying_assignment(eq).map(|assignment| Countermodel {
                    algebra: m.clone(),
                    assignment,
                })
            }),
            None => search_countermodel(&self.theory, eq, self.budget.max_model_size),
        };
        match found {
            Some(c) => Verdict::Refuted(c),
            None => exhausted(),
        }
    }

    /// Cheap disproof first, then proof search.
    pub fn decide(&self, eq: &Equation) -> EqVerdict {
        let refuted = self.refute(eq);
        if refuted.is_refuted() {
            return refuted;
        }
        match self.prove(eq) {
            Verdict::Unknown(Unknown::Exhausted { dims }) => {
                let mut all = vec![BudgetDim::ModelSize];
                all.extend(dims);
                Verdict::Unknown(Unknown::Exhausted { dims: all })
            }
            other => other,
        }
    }

    /// Whether `decide` proves the equation.
    pub fn proves(&self, eq: &Equation) -> bool {
        self.decide(eq).is_proved()
    }

    /// Canonical representative with variables ordered by name.
    pub fn normalize(&self, t: &Term) -> Term {
        self.normalize_in(t, &TermOrder::by_name())
    }

    /// Canonical representative under `order`.
    pub fn normalize_in(&self, t: &Term, order: &TermOrder) -> Term {
        self.normal_form(t, order).last().clone()
    }

    /// Canonical representative with a derivation from `t` to it.
    ///
    /// Without an exact normalizer this is the least term (under `order`)
    /// reachable from `t` through terms no larger than `t`, which makes the
    /// result idempotent.
    pub fn normal_form(&self, t: &Term, order: &TermOrder) -> Proof {
        if let Some(n) = &self.normalizer {
            return n.normalize(t, order);
        }
        self.closure_minimum(t, order).0
    }

    pub fn find_models(&self, max_size: usize) -> Vec<FiniteAlgebra> {
        find_models(&self.theory, max_size)
    }
}

/// `prove` against a fresh engine.
pub fn prove(th: &Theory, eq: &Equation, b: &Budget) -> EqVerdict {
    Engine::new(th.clone(), *b).prove(eq)
}

pub fn refute(th: &Theory, eq: &Equation, b: &Budget) -> EqVerdict {
    Engine::new(th.clone(), *b).refute(eq)
}

pub fn decide(th: &Theory, eq: &Equation, b: &Budget) -> EqVerdict {
    Engine::new(th.clone(), *b).decide(eq)
}

pub fn normalize(th: &Theory, t: &Term, b: &Budget) -> Term {
    Engine::new(th.clone(), *b).normalize(t)
}
