//! Breadth-first exploration of the size-bounded rewrite closure.

use std::collections::HashMap;

use super::proof::{successors, Proof, Rule, Step};
use crate::term::Term;

pub(crate) enum Outcome {
    Found(Proof),
    /// One side's component was explored completely without meeting.
    Closed,
    OutOfSteps,
}

struct Side {
    nodes: Vec<Term>,
    parent: Vec<Option<(usize, Step)>>,
    index: HashMap<Term, usize>,
    next: usize,
}

impl Side {
    fn new(root: Term) -> Self {
        let mut index = HashMap::new();
        index.insert(root.clone(), 0);
        Side {
            nodes: vec![root],
            parent: vec![None],
            index,
            next: 0,
        }
    }

    fn pending(&self) -> usize {
        self.nodes.len() - self.next
    }

    fn push(&mut self, t: Term, parent: usize, step: Step) {
        self.index.insert(t.clone(), self.nodes.len());
        self.nodes.push(t);
        self.parent.push(Some((parent, step)));
    }

    /// Derivation from the root to node `i`.
    fn path(&self, mut i: usize) -> Proof {
        let mut terms = vec![self.nodes[i].clone()];
        let mut steps = Vec::new();
        while let Some((p, step)) = &self.parent[i] {
            steps.push(step.clone());
            terms.push(self.nodes[*p].clone());
            i = *p;
        }
        terms.reverse();
        steps.reverse();
        Proof { terms, steps }
    }
}

/// Bidirectional search for a derivation `lhs = rhs` through terms of
/// size at most `cap` (the endpoints themselves may be larger). Each node
/// expansion consumes one unit of `steps`.
pub(crate) fn connect(
    lhs: &Term,
    rhs: &Term,
    rules: &[Rule],
    pool: &[Term],
    cap: usize,
    steps: &mut usize,
) -> Outcome {
    if lhs == rhs {
        return Outcome::Found(Proof::reflexivity(lhs.clone()));
    }
    let mut sides = [Side::new(lhs.clone()), Side::new(rhs.clone())];
    // successors past the cap are only useful if they hit the far endpoint
    let reach = cap.max(lhs.size()).max(rhs.size());
    loop {
        if sides[0].pending() == 0 || sides[1].pending() == 0 {
            return Outcome::Closed;
        }
        if *steps == 0 {
            return Outcome::OutOfSteps;
        }
        *steps -= 1;
        let s = usize::from(sides[1].pending() < sides[0].pending());
        let o = 1 - s;
        let i = sides[s].next;
        sides[s].next += 1;
        let node = sides[s].nodes[i].clone();
        for (t, step) in successors(&node, rules, pool, reach) {
            if let Some(&j) = sides[o].index.get(&t) {
                let mut forward = sides[s].path(i);
                forward.terms.push(t);
                forward.steps.push(step);
                let proof = forward.then(sides[o].path(j).reversed());
                return Outcome::Found(if s == 0 { proof } else { proof.reversed() });
            }
            if t.size() <= cap && !sides[s].index.contains_key(&t) {
                sides[s].push(t, i, step);
            }
        }
    }
}

/// Terms reachable from `start` through terms of size at most `cap`,
/// with a derivation to each. Stops early when `steps` runs out.
pub(crate) struct Closure {
    side: Side,
    pub complete: bool,
}

impl Closure {
    pub fn explore(start: &Term, rules: &[Rule], pool: &[Term], cap: usize, steps: &mut usize) -> Closure {
        let mut side = Side::new(start.clone());
        while side.pending() > 0 {
            if *steps == 0 {
                return Closure { side, complete: false };
            }
            *steps -= 1;
            let i = side.next;
            side.next += 1;
            let node = side.nodes[i].clone();
            for (t, step) in successors(&node, rules, pool, cap) {
                if !side.index.contains_key(&t) {
                    side.push(t, i, step);
                }
            }
        }
        Closure { side, complete: true }
    }

    pub fn terms(&self) -> &[Term] {
        &self.side.nodes
    }

    pub fn derivation_to(&self, t: &Term) -> Option<Proof> {
        self.side.index.get(t).map(|&i| self.side.path(i))
    }
}
