//! Single rewrite steps, derivations and their replay.

use serde::Serialize;
use thiserror::Error;

use crate::term::{Equation, Name, Term, Theory};

/// One application of an axiom: at `position`, an instance of one side of
/// axiom `axiom` is replaced by the matching instance of the other side.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Step {
    pub axiom: usize,
    /// `true` when the axiom was used right-to-left.
    pub reversed: bool,
    pub position: Vec<usize>,
}

impl Step {
    /// The same step read backwards.
    pub fn inverse(&self) -> Step {
        Step {
            axiom: self.axiom,
            reversed: !self.reversed,
            position: self.position.clone(),
        }
    }

    pub(crate) fn shifted(&self, prefix: &[usize]) -> Step {
        let mut position = prefix.to_vec();
        position.extend_from_slice(&self.position);
        Step {
            axiom: self.axiom,
            reversed: self.reversed,
            position,
        }
    }
}

/// An equational derivation `terms[0] = terms[1] = ... = terms[n]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Proof {
    pub terms: Vec<Term>,
    pub steps: Vec<Step>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReplayError {
    #[error("derivation is empty")]
    Empty,
    #[error("derivation has {terms} terms but {steps} steps")]
    Shape { terms: usize, steps: usize },
    #[error("derivation does not start at the left-hand side")]
    WrongStart,
    #[error("derivation does not end at the right-hand side")]
    WrongEnd,
    #[error("step {index} is not a valid application of axiom {axiom}")]
    InvalidStep { index: usize, axiom: usize },
}

impl Proof {
    pub fn reflexivity(t: Term) -> Proof {
        Proof {
            terms: vec![t],
            steps: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn first(&self) -> &Term {
        &self.terms[0]
    }

    pub fn last(&self) -> &Term {
        self.terms.last().expect("proofs are non-empty")
    }

    /// The derivation read from its last term to its first.
    pub fn reversed(&self) -> Proof {
        Proof {
            terms: self.terms.iter().rev().cloned().collect(),
            steps: self.steps.iter().rev().map(Step::inverse).collect(),
        }
    }

    /// Concatenates two derivations sharing the middle term.
    pub fn then(mut self, next: Proof) -> Proof {
        debug_assert_eq!(self.last(), next.first());
        self.terms.extend(next.terms.into_iter().skip(1));
        self.steps.extend(next.steps);
        self
    }

    /// Checks every step against the axioms of `th` and the endpoints
    /// against `eq`.
    pub fn replay(&self, th: &Theory, eq: &Equation) -> Result<(), ReplayError> {
        if self.terms.is_empty() {
            return Err(ReplayError::Empty);
        }
        if self.terms.len() != self.steps.len() + 1 {
            return Err(ReplayError::Shape {
                terms: self.terms.len(),
                steps: self.steps.len(),
            });
        }
        if self.first() != &eq.lhs {
            return Err(ReplayError::WrongStart);
        }
        if self.last() != &eq.rhs {
            return Err(ReplayError::WrongEnd);
        }
        for (i, step) in self.steps.iter().enumerate() {
            if !check_step(th, &self.terms[i], &self.terms[i + 1], step) {
                return Err(ReplayError::InvalidStep {
                    index: i,
                    axiom: step.axiom,
                });
            }
        }
        Ok(())
    }
}

pub(crate) type Bindings = Vec<(Name, Term)>;

fn lookup<'b>(b: &'b Bindings, v: &Name) -> Option<&'b Term> {
    b.iter().find(|(w, _)| w == v).map(|(_, t)| t)
}

/// Extends `b` so that `pattern` instantiated by `b` equals `t`.
pub(crate) fn match_into(pattern: &Term, t: &Term, b: &mut Bindings) -> bool {
    match pattern {
        Term::Var(v) => match lookup(b, v) {
            Some(bound) => bound == t,
            None => {
                b.push((v.clone(), t.clone()));
                true
            }
        },
        Term::App(f, pargs) => match t {
            Term::App(g, targs) if f == g => {
                pargs.iter().zip(targs).all(|(p, a)| match_into(p, a, b))
            }
            _ => false,
        },
    }
}

pub(crate) fn instantiate(pattern: &Term, b: &Bindings) -> Term {
    match pattern {
        Term::Var(v) => lookup(b, v).cloned().unwrap_or_else(|| pattern.clone()),
        Term::App(f, args) => Term::App(*f, args.iter().map(|a| instantiate(a, b)).collect()),
    }
}

fn instantiated_size(pattern: &Term, b: &Bindings) -> usize {
    match pattern {
        Term::Var(v) => lookup(b, v).map_or(1, Term::size),
        Term::App(_, args) => 1 + args.iter().map(|a| instantiated_size(a, b)).sum::<usize>(),
    }
}

fn sides<'a>(th: &'a Theory, step: &Step) -> Option<(&'a Term, &'a Term)> {
    let ax = th.equations().get(step.axiom)?;
    Some(if step.reversed {
        (&ax.rhs, &ax.lhs)
    } else {
        (&ax.lhs, &ax.rhs)
    })
}

/// Whether `to` arises from `from` by the given step.
pub fn check_step(th: &Theory, from: &Term, to: &Term, step: &Step) -> bool {
    let Some((l, r)) = sides(th, step) else {
        return false;
    };
    let (Some(a), Some(b)) = (from.at(&step.position), to.at(&step.position)) else {
        return false;
    };
    if from.replace_at(&step.position, b.clone()) != *to {
        return false;
    }
    let mut binds = Bindings::new();
    match_into(l, a, &mut binds) && match_into(r, b, &mut binds)
}

/// Searches for a single axiom step turning `from` into `to`.
pub fn find_step(th: &Theory, from: &Term, to: &Term) -> Option<Step> {
    for position in from.positions() {
        for axiom in 0..th.equations().len() {
            for reversed in [false, true] {
                let step = Step {
                    axiom,
                    reversed,
                    position: position.clone(),
                };
                if check_step(th, from, to, &step) {
                    return Some(step);
                }
            }
        }
    }
    None
}

/// An axiom used in one direction, ready for matching.
#[derive(Debug, Clone)]
pub(crate) struct Rule {
    pub lhs: Term,
    pub rhs: Term,
    pub axiom: usize,
    pub reversed: bool,
    /// Variables of `rhs` not bound by matching `lhs`.
    pub extra: Vec<Name>,
}

pub(crate) fn rules_of(th: &Theory) -> Vec<Rule> {
    let mut out = Vec::new();
    for (i, eq) in th.equations().iter().enumerate() {
        for reversed in [false, true] {
            let (l, r) = if reversed {
                (&eq.rhs, &eq.lhs)
            } else {
                (&eq.lhs, &eq.rhs)
            };
            if l == r {
                continue;
            }
            let lv = l.vars();
            let extra = r.vars().into_iter().filter(|v| !lv.contains(v)).collect();
            out.push(Rule {
                lhs: l.clone(),
                rhs: r.clone(),
                axiom: i,
                reversed,
                extra,
            });
        }
    }
    out
}

/// All one-step rewrites of `t` whose result has size at most `cap`.
/// Variables that appear only on the produced side are instantiated from
/// `pool`.
pub(crate) fn successors(t: &Term, rules: &[Rule], pool: &[Term], cap: usize) -> Vec<(Term, Step)> {
    let mut out = Vec::new();
    let total = t.size();
    let mut path = Vec::new();
    walk(t, t, total, rules, pool, cap, &mut path, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn walk(
    root: &Term,
    sub: &Term,
    total: usize,
    rules: &[Rule],
    pool: &[Term],
    cap: usize,
    path: &mut Vec<usize>,
    out: &mut Vec<(Term, Step)>,
) {
    let sub_size = sub.size();
    for rule in rules {
        let mut binds = Bindings::new();
        if !match_into(&rule.lhs, sub, &mut binds) {
            continue;
        }
        let mut emit = |binds: &Bindings| {
            if total - sub_size + instantiated_size(&rule.rhs, binds) <= cap {
                let new_sub = instantiate(&rule.rhs, binds);
                out.push((
                    root.replace_at(path, new_sub),
                    Step {
                        axiom: rule.axiom,
                        reversed: rule.reversed,
                        position: path.clone(),
                    },
                ));
            }
        };
        if rule.extra.is_empty() {
            emit(&binds);
        } else if !pool.is_empty() {
            let mut choice = vec![0usize; rule.extra.len()];
            loop {
                let mut b = binds.clone();
                for (v, &c) in rule.extra.iter().zip(&choice) {
                    b.push((v.clone(), pool[c].clone()));
                }
                emit(&b);
                if !advance(&mut choice, pool.len()) {
                    break;
                }
            }
        }
    }
    if let Term::App(_, args) = sub {
        for (i, a) in args.iter().enumerate() {
            path.push(i);
            walk(root, a, total, rules, pool, cap, path, out);
            path.pop();
        }
    }
}

/// Odometer increment over `base^digits`; false once it wraps around.
pub(crate) fn advance(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}
