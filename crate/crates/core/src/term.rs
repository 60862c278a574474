//! Signatures, terms, equations and theories.
//!
//! Terms carry symbol indices into a [`Signature`] and variable names as
//! shared strings. Nothing here knows about provability; see
//! [`crate::engine`] for that.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Variable name.
pub type Name = Arc<str>;

/// Builds a variable name.
pub fn name(s: &str) -> Name {
    Arc::from(s)
}

/// Builds a list of variable names.
pub fn names(list: &[&str]) -> Vec<Name> {
    list.iter().map(|s| name(s)).collect()
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TermError {
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("unknown symbol index {0}")]
    UnknownSymbol(usize),
    #[error("symbol `{symbol}` expects {expected} arguments, got {found}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("position {0:?} does not resolve to a variable")]
    NotAVariable(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

/// Function symbols with arities, in declaration order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    symbols: Vec<Symbol>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_symbols<'a>(
        symbols: impl IntoIterator<Item = (&'a str, usize)>,
    ) -> Result<Self, TermError> {
        let mut sig = Signature::new();
        for (n, a) in symbols {
            sig.add(n, a)?;
        }
        Ok(sig)
    }

    /// Appends a symbol and returns its index.
    pub fn add(&mut self, name: &str, arity: usize) -> Result<usize, TermError> {
        if self.lookup(name).is_some() {
            return Err(TermError::DuplicateSymbol(name.to_string()));
        }
        self.symbols.push(Symbol {
            name: name.to_string(),
            arity,
        });
        Ok(self.symbols.len() - 1)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn symbol(&self, index: usize) -> &Symbol {
        &self.symbols[index]
    }

    pub fn arity(&self, index: usize) -> usize {
        self.symbols[index].arity
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    /// Indices of nullary symbols.
    pub fn constants(&self) -> impl Iterator<Item = usize> + '_ {
        self.symbols
            .iter()
            .enumerate()
            .filter(|(_, s)| s.arity == 0)
            .map(|(i, _)| i)
    }
}

/// A first-order term: a variable or a symbol applied to arguments.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Name),
    App(usize, Vec<Term>),
}

impl Term {
    pub fn var(n: &str) -> Term {
        Term::Var(name(n))
    }

    pub fn app(symbol: usize, args: Vec<Term>) -> Term {
        Term::App(symbol, args)
    }

    pub fn constant(symbol: usize) -> Term {
        Term::App(symbol, Vec::new())
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn as_var(&self) -> Option<&Name> {
        match self {
            Term::Var(v) => Some(v),
            Term::App(..) => None,
        }
    }

    /// Node count.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    /// Distinct variables in order of first occurrence (preorder).
    pub fn vars(&self) -> Vec<Name> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut Vec<Name>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn contains_var(&self, v: &str) -> bool {
        match self {
            Term::Var(w) => &**w == v,
            Term::App(_, args) => args.iter().any(|a| a.contains_var(v)),
        }
    }

    /// Subterm at a path of child indices.
    pub fn at(&self, path: &[usize]) -> Option<&Term> {
        let mut cur = self;
        for &i in path {
            match cur {
                Term::App(_, args) => cur = args.get(i)?,
                Term::Var(_) => return None,
            }
        }
        Some(cur)
    }

    /// Copy of `self` with the subterm at `path` replaced.
    ///
    /// Panics if the path does not resolve.
    pub fn replace_at(&self, path: &[usize], new: Term) -> Term {
        match path.split_first() {
            None => new,
            Some((&i, rest)) => match self {
                Term::App(f, args) => {
                    let mut args = args.clone();
                    args[i] = args[i].replace_at(rest, new);
                    Term::App(*f, args)
                }
                Term::Var(_) => panic!("path runs through a variable"),
            },
        }
    }

    /// All positions in preorder.
    pub fn positions(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.walk_positions(&mut path, &mut out, false);
        out
    }

    /// Positions of variable nodes, in preorder.
    pub fn var_positions(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.walk_positions(&mut path, &mut out, true);
        out
    }

    fn walk_positions(&self, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>, vars_only: bool) {
        match self {
            Term::Var(_) => out.push(path.clone()),
            Term::App(_, args) => {
                if !vars_only {
                    out.push(path.clone());
                }
                for (i, a) in args.iter().enumerate() {
                    path.push(i);
                    a.walk_positions(path, out, vars_only);
                    path.pop();
                }
            }
        }
    }

    /// Simultaneous substitution; unmapped variables stay put.
    pub fn substitute(&self, sigma: &Substitution) -> Term {
        match self {
            Term::Var(v) => sigma.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::App(f, args) => Term::App(*f, args.iter().map(|a| a.substitute(sigma)).collect()),
        }
    }

    /// Checks symbol indices and argument counts against `sig`.
    pub fn check(&self, sig: &Signature) -> Result<(), TermError> {
        match self {
            Term::Var(_) => Ok(()),
            Term::App(f, args) => {
                if *f >= sig.len() {
                    return Err(TermError::UnknownSymbol(*f));
                }
                let s = sig.symbol(*f);
                if s.arity != args.len() {
                    return Err(TermError::ArityMismatch {
                        symbol: s.name.clone(),
                        expected: s.arity,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|a| a.check(sig))
            }
        }
    }

    /// Renders the term in the theory DSL.
    pub fn display<'a>(&'a self, sig: &'a Signature) -> TermDisplay<'a> {
        TermDisplay { term: self, sig }
    }
}

pub struct TermDisplay<'a> {
    term: &'a Term,
    sig: &'a Signature,
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.term {
            Term::Var(v) => f.write_str(v),
            Term::App(s, args) => {
                write!(f, "{}(", self.sig.symbol(*s).name)?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{}", a.display(self.sig))?;
                }
                f.write_str(")")
            }
        }
    }
}

/// A finite map from variable names to terms.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    map: HashMap<Name, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Name, Term)>) -> Self {
        Substitution {
            map: pairs.into_iter().collect(),
        }
    }

    /// Variable renaming `from[i] ↦ to[i]`.
    pub fn renaming(from: &[Name], to: &[Name]) -> Self {
        Self::from_pairs(
            from.iter()
                .cloned()
                .zip(to.iter().map(|v| Term::Var(v.clone()))),
        )
    }

    pub fn insert(&mut self, v: Name, t: Term) {
        self.map.insert(v, t);
    }

    pub fn get(&self, v: &str) -> Option<&Term> {
        self.map.get(v)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &Term)> {
        self.map.iter()
    }

    /// `self` after `first`: applying the result equals applying `first`
    /// and then `self`.
    pub fn after(&self, first: &Substitution) -> Substitution {
        let mut map: HashMap<Name, Term> = first
            .map
            .iter()
            .map(|(v, t)| (v.clone(), t.substitute(self)))
            .collect();
        for (v, t) in &self.map {
            map.entry(v.clone()).or_insert_with(|| t.clone());
        }
        Substitution { map }
    }
}

/// `lhs ≈ rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
}

impl Equation {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Equation { lhs, rhs }
    }

    pub fn flipped(&self) -> Equation {
        Equation::new(self.rhs.clone(), self.lhs.clone())
    }

    /// Variables of both sides, lhs first.
    pub fn vars(&self) -> Vec<Name> {
        let mut out = Vec::new();
        self.lhs.collect_vars(&mut out);
        self.rhs.collect_vars(&mut out);
        out
    }

    pub fn substitute(&self, sigma: &Substitution) -> Equation {
        Equation::new(self.lhs.substitute(sigma), self.rhs.substitute(sigma))
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> EquationDisplay<'a> {
        EquationDisplay { eq: self, sig }
    }
}

pub struct EquationDisplay<'a> {
    eq: &'a Equation,
    sig: &'a Signature,
}

impl fmt::Display for EquationDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} = {}",
            self.eq.lhs.display(self.sig),
            self.eq.rhs.display(self.sig)
        )
    }
}

/// A signature together with a finite set of equations.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Theory {
    signature: Signature,
    equations: Vec<Equation>,
}

impl Theory {
    pub fn new(signature: Signature, equations: Vec<Equation>) -> Result<Self, TermError> {
        for eq in &equations {
            eq.lhs.check(&signature)?;
            eq.rhs.check(&signature)?;
        }
        Ok(Theory {
            signature,
            equations,
        })
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    /// Checks that an equation is well-formed over this signature.
    pub fn check_equation(&self, eq: &Equation) -> Result<(), TermError> {
        eq.lhs.check(&self.signature)?;
        eq.rhs.check(&self.signature)
    }

    /// Renders a term over this theory's signature.
    pub fn show(&self, t: &Term) -> String {
        t.display(&self.signature).to_string()
    }

    pub fn show_eq(&self, eq: &Equation) -> String {
        eq.display(&self.signature).to_string()
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "signature:")?;
        for s in self.signature.symbols() {
            writeln!(f, "  {}/{}", s.name, s.arity)?;
        }
        writeln!(f, "equations:")?;
        for eq in &self.equations {
            writeln!(f, "  {}", eq.display(&self.signature))?;
        }
        Ok(())
    }
}

/// One distinguished variable position inside a term.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarOccurrence {
    term: Term,
    path: Vec<usize>,
}

impl VarOccurrence {
    pub fn new(term: Term, path: Vec<usize>) -> Result<Self, TermError> {
        match term.at(&path) {
            Some(Term::Var(_)) => Ok(VarOccurrence { term, path }),
            _ => Err(TermError::NotAVariable(path)),
        }
    }

    /// The `index`-th variable position in preorder.
    pub fn nth(term: Term, index: usize) -> Result<Self, TermError> {
        let path = term
            .var_positions()
            .into_iter()
            .nth(index)
            .ok_or_else(|| TermError::NotAVariable(vec![index]))?;
        Ok(VarOccurrence { term, path })
    }

    pub fn term(&self) -> &Term {
        &self.term
    }

    pub fn path(&self) -> &[usize] {
        &self.path
    }

    /// Name of the variable at the occurrence.
    pub fn variable(&self) -> &Name {
        match self.term.at(&self.path) {
            Some(Term::Var(v)) => v,
            _ => unreachable!("checked on construction"),
        }
    }
}

/// The canonical total order on terms: size first, then preorder tokens
/// with variables before symbols, variables by list position (unlisted
/// variables after listed ones, by name), symbols by declaration index.
#[derive(Debug, Clone, Default)]
pub struct TermOrder {
    ranks: HashMap<Name, usize>,
}

impl TermOrder {
    pub fn new(vars: &[Name]) -> Self {
        let mut ranks = HashMap::new();
        for (i, v) in vars.iter().enumerate() {
            ranks.entry(v.clone()).or_insert(i);
        }
        TermOrder { ranks }
    }

    /// Orders all variables by name.
    pub fn by_name() -> Self {
        Self::default()
    }

    pub fn compare_vars(&self, a: &Name, b: &Name) -> Ordering {
        match (self.ranks.get(a), self.ranks.get(b)) {
            (Some(x), Some(y)) => x.cmp(y),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => a.cmp(b),
        }
    }

    pub fn compare(&self, a: &Term, b: &Term) -> Ordering {
        a.size().cmp(&b.size()).then_with(|| self.preorder(a, b))
    }

    fn preorder(&self, a: &Term, b: &Term) -> Ordering {
        match (a, b) {
            (Term::Var(x), Term::Var(y)) => self.compare_vars(x, y),
            (Term::Var(_), Term::App(..)) => Ordering::Less,
            (Term::App(..), Term::Var(_)) => Ordering::Greater,
            (Term::App(f, xs), Term::App(g, ys)) => f.cmp(g).then_with(|| {
                xs.iter()
                    .zip(ys)
                    .map(|(x, y)| self.preorder(x, y))
                    .find(|o| o.is_ne())
                    .unwrap_or(Ordering::Equal)
            }),
        }
    }

    pub fn sort(&self, terms: &mut [Term]) {
        terms.sort_by(|a, b| self.compare(a, b));
    }

    pub fn min<'a>(&self, terms: impl IntoIterator<Item = &'a Term>) -> Option<&'a Term> {
        terms.into_iter().min_by(|a, b| self.compare(a, b))
    }
}

/// Returns `count` names built from `stem` that avoid `taken`.
pub fn fresh_names(stem: &str, count: usize, taken: &HashSet<Name>) -> Vec<Name> {
    let mut out = Vec::with_capacity(count);
    let mut i = 1;
    while out.len() < count {
        let candidate = name(&format!("{stem}{i}"));
        if !taken.contains(&candidate) {
            out.push(candidate);
        }
        i += 1;
    }
    out
}

/// `stem` itself if free, otherwise the first free `stem<i>`.
pub fn fresh_name(stem: &str, taken: &HashSet<Name>) -> Name {
    let plain = name(stem);
    if !taken.contains(&plain) {
        return plain;
    }
    fresh_names(stem, 1, taken).remove(0)
}
