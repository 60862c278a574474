//! Finite algebras and a small backtracking model finder.
//!
//! Tables are filled cell by cell. After every decision the axioms are
//! propagated: an instance whose one side evaluates and whose other side
//! is blocked only at its root cell forces that cell.

use std::collections::HashMap;
use std::ops::ControlFlow;

use serde::Serialize;
use thiserror::Error;

use super::proof::advance;
use crate::term::{Equation, Name, Signature, Term, Theory};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("variable `{0}` is not assigned")]
    UnmappedVariable(String),
    #[error("symbol index {0} has no table")]
    UnknownSymbol(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("expected {expected} tables, got {found}")]
    TableCount { expected: usize, found: usize },
    #[error("table for symbol {symbol} has {found} cells, expected {expected}")]
    TableShape {
        symbol: usize,
        expected: usize,
        found: usize,
    },
    #[error("table for symbol {symbol} has value {value} outside the carrier")]
    OutOfRange { symbol: usize, value: usize },
    #[error("carrier must be non-empty")]
    EmptyCarrier,
}

/// A carrier `{0..size-1}` with one total operation table per symbol.
/// Tables are row-major over the argument tuple.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FiniteAlgebra {
    size: usize,
    tables: Vec<Vec<usize>>,
}

impl FiniteAlgebra {
    pub fn new(sig: &Signature, size: usize, tables: Vec<Vec<usize>>) -> Result<Self, ModelError> {
        if size == 0 {
            return Err(ModelError::EmptyCarrier);
        }
        if tables.len() != sig.len() {
            return Err(ModelError::TableCount {
                expected: sig.len(),
                found: tables.len(),
            });
        }
        for (f, table) in tables.iter().enumerate() {
            let expected = size.pow(sig.arity(f) as u32);
            if table.len() != expected {
                return Err(ModelError::TableShape {
                    symbol: f,
                    expected,
                    found: table.len(),
                });
            }
            if let Some(&value) = table.iter().find(|&&v| v >= size) {
                return Err(ModelError::OutOfRange { symbol: f, value });
            }
        }
        Ok(FiniteAlgebra { size, tables })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn tables(&self) -> &[Vec<usize>] {
        &self.tables
    }

    pub fn apply(&self, f: usize, args: &[usize]) -> usize {
        let idx = args.iter().fold(0, |acc, &a| acc * self.size + a);
        self.tables[f][idx]
    }

    pub fn eval(&self, t: &Term, rho: &HashMap<Name, usize>) -> Result<usize, EvalError> {
        match t {
            Term::Var(v) => rho
                .get(v)
                .copied()
                .ok_or_else(|| EvalError::UnmappedVariable(v.to_string())),
            Term::App(f, args) => {
                if *f >= self.tables.len() {
                    return Err(EvalError::UnknownSymbol(*f));
                }
                let vals = args
                    .iter()
                    .map(|a| self.eval(a, rho))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(self.apply(*f, &vals))
            }
        }
    }

    /// First assignment (lexicographic over the equation's variables in
    /// first-occurrence order) under which the sides differ.
    pub fn falsifying_assignment(&self, eq: &Equation) -> Option<Vec<(Name, usize)>> {
        let vars = eq.vars();
        let mut digits = vec![0; vars.len()];
        let mut rho = HashMap::new();
        loop {
            for (v, &d) in vars.iter().zip(&digits) {
                rho.insert(v.clone(), d);
            }
            let l = self.eval(&eq.lhs, &rho).expect("all variables assigned");
            let r = self.eval(&eq.rhs, &rho).expect("all variables assigned");
            if l != r {
                return Some(vars.iter().cloned().zip(digits.iter().copied()).collect());
            }
            if !advance(&mut digits, self.size) {
                return None;
            }
        }
    }

    pub fn satisfies(&self, eq: &Equation) -> bool {
        self.falsifying_assignment(eq).is_none()
    }

    /// Exhaustive check of every axiom.
    pub fn is_model_of(&self, th: &Theory) -> bool {
        self.tables.len() == th.signature().len() && th.equations().iter().all(|e| self.satisfies(e))
    }
}

/// Standard bottom-up evaluation.
pub fn eval_term(
    a: &FiniteAlgebra,
    t: &Term,
    rho: &HashMap<Name, usize>,
) -> Result<usize, EvalError> {
    a.eval(t, rho)
}

/// A model of the theory plus an assignment falsifying some equation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Countermodel {
    pub algebra: FiniteAlgebra,
    pub assignment: Vec<(Name, usize)>,
}

impl Countermodel {
    pub fn rho(&self) -> HashMap<Name, usize> {
        self.assignment.iter().cloned().collect()
    }

    /// Re-checks that the algebra models `th` and falsifies `eq`.
    pub fn validates(&self, th: &Theory, eq: &Equation) -> bool {
        let rho = self.rho();
        let l = self.algebra.eval(&eq.lhs, &rho);
        let r = self.algebra.eval(&eq.rhs, &rho);
        matches!((l, r), (Ok(a), Ok(b)) if a != b) && self.algebra.is_model_of(th)
    }
}

/// Term compiled against a fixed variable numbering.
#[derive(Debug, Clone)]
enum CTerm {
    Var(usize),
    App(usize, Vec<CTerm>),
}

fn compile(t: &Term, vars: &[Name]) -> CTerm {
    match t {
        Term::Var(v) => CTerm::Var(vars.iter().position(|w| w == v).expect("variable is indexed")),
        Term::App(f, args) => CTerm::App(*f, args.iter().map(|a| compile(a, vars)).collect()),
    }
}

enum PEval {
    Val(usize),
    /// Evaluation stops at an undefined cell; `top` when it is the root.
    Need { cell: usize, top: bool },
}

const UNSET: usize = usize::MAX;

struct Instance {
    lhs: CTerm,
    rhs: CTerm,
    assignment: Vec<usize>,
}

/// Partial tables for one carrier size.
struct Search {
    k: usize,
    arities: Vec<usize>,
    offsets: Vec<usize>,
    cells: Vec<usize>,
    trail: Vec<usize>,
    order: Vec<usize>,
    instances: Vec<Instance>,
}

impl Search {
    fn new(th: &Theory, k: usize) -> Self {
        let sig = th.signature();
        let arities: Vec<usize> = sig.symbols().iter().map(|s| s.arity).collect();
        let mut offsets = Vec::with_capacity(arities.len());
        let mut total = 0;
        for &a in &arities {
            offsets.push(total);
            total += k.pow(a as u32);
        }
        // Fixed cell order: symbols by arity, then declaration; cells by tuple.
        let mut syms: Vec<usize> = (0..arities.len()).collect();
        syms.sort_by_key(|&f| (arities[f], f));
        let mut order = Vec::with_capacity(total);
        for &f in &syms {
            order.extend((0..k.pow(arities[f] as u32)).map(|c| offsets[f] + c));
        }

        let mut instances = Vec::new();
        for eq in th.equations() {
            let vars = eq.vars();
            let lhs = compile(&eq.lhs, &vars);
            let rhs = compile(&eq.rhs, &vars);
            let mut digits = vec![0; vars.len()];
            loop {
                instances.push(Instance {
                    lhs: lhs.clone(),
                    rhs: rhs.clone(),
                    assignment: digits.clone(),
                });
                if !advance(&mut digits, k) {
                    break;
                }
            }
        }
        Search {
            k,
            arities,
            offsets,
            cells: vec![UNSET; total],
            trail: Vec::new(),
            order,
            instances,
        }
    }

    fn cell_index(&self, f: usize, args: &[usize]) -> usize {
        self.offsets[f] + args.iter().fold(0, |acc, &a| acc * self.k + a)
    }

    fn eval(&self, t: &CTerm, rho: &[usize]) -> PEval {
        match t {
            CTerm::Var(i) => PEval::Val(rho[*i]),
            CTerm::App(f, args) => {
                let mut vals = [0usize; 8];
                let mut heap = Vec::new();
                for (i, a) in args.iter().enumerate() {
                    match self.eval(a, rho) {
                        PEval::Val(v) => {
                            if args.len() <= 8 {
                                vals[i] = v;
                            } else {
                                heap.push(v);
                            }
                        }
                        PEval::Need { cell, .. } => return PEval::Need { cell, top: false },
                    }
                }
                let argv: &[usize] = if args.len() <= 8 { &vals[..args.len()] } else { &heap };
                let cell = self.cell_index(*f, argv);
                match self.cells[cell] {
                    UNSET => PEval::Need { cell, top: true },
                    v => PEval::Val(v),
                }
            }
        }
    }

    fn set(&mut self, cell: usize, v: usize) {
        self.cells[cell] = v;
        self.trail.push(cell);
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let c = self.trail.pop().expect("trail above mark");
            self.cells[c] = UNSET;
        }
    }

    /// Runs axiom propagation to a fixpoint; false on conflict.
    fn propagate(&mut self) -> bool {
        loop {
            let mut changed = false;
            for i in 0..self.instances.len() {
                let inst = &self.instances[i];
                let l = self.eval(&inst.lhs, &inst.assignment);
                let r = self.eval(&inst.rhs, &inst.assignment);
                match (l, r) {
                    (PEval::Val(a), PEval::Val(b)) => {
                        if a != b {
                            return false;
                        }
                    }
                    (PEval::Val(a), PEval::Need { cell, top: true })
                    | (PEval::Need { cell, top: true }, PEval::Val(a)) => {
                        self.set(cell, a);
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn first_unset(&self) -> Option<usize> {
        self.order.iter().copied().find(|&c| self.cells[c] == UNSET)
    }

    fn snapshot(&self) -> FiniteAlgebra {
        let tables = self
            .arities
            .iter()
            .enumerate()
            .map(|(f, &a)| {
                let start = self.offsets[f];
                self.cells[start..start + self.k.pow(a as u32)].to_vec()
            })
            .collect();
        FiniteAlgebra {
            size: self.k,
            tables,
        }
    }

    /// Visits every complete model in fixed cell order.
    fn enumerate(&mut self, visit: &mut dyn FnMut(FiniteAlgebra) -> ControlFlow<()>) -> ControlFlow<()> {
        let mark = self.trail.len();
        if !self.propagate() {
            self.undo(mark);
            return ControlFlow::Continue(());
        }
        let flow = match self.first_unset() {
            None => visit(self.snapshot()),
            Some(cell) => {
                let mut flow = ControlFlow::Continue(());
                for v in 0..self.k {
                    let inner = self.trail.len();
                    self.set(cell, v);
                    flow = self.enumerate(visit);
                    self.undo(inner);
                    if flow.is_break() {
                        break;
                    }
                }
                flow
            }
        };
        self.undo(mark);
        flow
    }

    /// Looks for a model where `lhs` and `rhs` differ under `rho`.
    /// Branches first on the cells the query needs.
    fn refute(&mut self, lhs: &CTerm, rhs: &CTerm, rho: &[usize]) -> Option<FiniteAlgebra> {
        let mark = self.trail.len();
        if !self.propagate() {
            self.undo(mark);
            return None;
        }
        let next = match (self.eval(lhs, rho), self.eval(rhs, rho)) {
            (PEval::Val(a), PEval::Val(b)) if a == b => {
                self.undo(mark);
                return None;
            }
            (PEval::Val(_), PEval::Val(_)) => self.first_unset(),
            (PEval::Need { cell, .. }, _) | (_, PEval::Need { cell, .. }) => Some(cell),
        };
        let found = match next {
            None => Some(self.snapshot()),
            Some(cell) => {
                let mut found = None;
                for v in 0..self.k {
                    let inner = self.trail.len();
                    self.set(cell, v);
                    found = self.refute(lhs, rhs, rho);
                    self.undo(inner);
                    if found.is_some() {
                        break;
                    }
                }
                found
            }
        };
        self.undo(mark);
        found
    }
}

/// Visits all models of `th` with carrier sizes `1..=max_size`, smallest
/// first, each size in fixed cell-enumeration order. Models are labeled:
/// isomorphic copies are all visited.
pub fn visit_models(
    th: &Theory,
    max_size: usize,
    visit: &mut dyn FnMut(FiniteAlgebra) -> ControlFlow<()>,
) -> ControlFlow<()> {
    for k in 1..=max_size {
        Search::new(th, k).enumerate(visit)?;
    }
    ControlFlow::Continue(())
}

/// All labeled models of size at most `max_size`.
pub fn find_models(th: &Theory, max_size: usize) -> Vec<FiniteAlgebra> {
    let mut out = Vec::new();
    let _ = visit_models(th, max_size, &mut |m| {
        out.push(m);
        ControlFlow::Continue(())
    });
    out
}

/// Like [`find_models`] but gives up (returning `None`) past `cap` models.
pub(crate) fn find_models_capped(th: &Theory, max_size: usize, cap: usize) -> Option<Vec<FiniteAlgebra>> {
    let mut out = Vec::new();
    let flow = visit_models(th, max_size, &mut |m| {
        out.push(m);
        if out.len() > cap {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    flow.is_continue().then_some(out)
}

/// Query-directed countermodel search: sizes ascending, assignments of the
/// query variables lexicographic, then backtracking that branches on the
/// cells the query needs first.
pub(crate) fn search_countermodel(th: &Theory, eq: &Equation, max_size: usize) -> Option<Countermodel> {
    let vars = eq.vars();
    let lhs = compile(&eq.lhs, &vars);
    let rhs = compile(&eq.rhs, &vars);
    for k in 1..=max_size {
        let mut search = Search::new(th, k);
        let mut digits = vec![0; vars.len()];
        loop {
            if let Some(algebra) = search.refute(&lhs, &rhs, &digits) {
                return Some(Countermodel {
                    algebra,
                    assignment: vars.iter().cloned().zip(digits.iter().copied()).collect(),
                });
            }
            if !advance(&mut digits, k) {
                break;
            }
        }
    }
    None
}
