//! Deterministic enumeration of terms in canonical order.

use crate::term::{Name, Signature, Term, TermOrder};

/// Lazily yields every term over `vars` of size `1..=max_size`, each once,
/// in canonical order (see [`TermOrder`]).
pub struct TermStream<'a> {
    sig: &'a Signature,
    vars: Vec<Name>,
    order: TermOrder,
    max_size: usize,
    levels: Vec<Vec<Term>>,
    size: usize,
    index: usize,
}

pub fn enumerate_terms<'a>(sig: &'a Signature, vars: &[Name], max_size: usize) -> TermStream<'a> {
    TermStream {
        sig,
        vars: vars.to_vec(),
        order: TermOrder::new(vars),
        max_size,
        // levels[0] stays empty so that levels[s] holds terms of size s.
        levels: vec![Vec::new()],
        size: 0,
        index: 0,
    }
}

impl TermStream<'_> {
    fn build_level(&mut self, s: usize) {
        let mut level = Vec::new();
        if s == 1 {
            level.extend(self.vars.iter().map(|v| Term::Var(v.clone())));
        }
        for (f, sym) in self.sig.symbols().iter().enumerate() {
            if sym.arity == 0 {
                if s == 1 {
                    level.push(Term::constant(f));
                }
            } else if s > sym.arity {
                let mut parts = vec![0; sym.arity];
                self.compose(f, s - 1, 0, &mut parts, &mut level);
            }
        }
        self.order.sort(&mut level);
        self.levels.push(level);
    }

    /// Splits `rest` into positive child sizes and emits all products.
    fn compose(&self, f: usize, rest: usize, i: usize, parts: &mut [usize], out: &mut Vec<Term>) {
        let n = parts.len();
        if i == n - 1 {
            parts[i] = rest;
            let mut args = Vec::with_capacity(n);
            self.product(f, parts, &mut args, out);
            return;
        }
        let remaining = n - i - 1;
        for k in 1..=rest.saturating_sub(remaining) {
            parts[i] = k;
            self.compose(f, rest - k, i + 1, parts, out);
        }
    }

    fn product(&self, f: usize, parts: &[usize], args: &mut Vec<Term>, out: &mut Vec<Term>) {
        let i = args.len();
        if i == parts.len() {
            out.push(Term::App(f, args.clone()));
            return;
        }
        for t in &self.levels[parts[i]] {
            args.push(t.clone());
            self.product(f, parts, args, out);
            args.pop();
        }
    }
}

impl Iterator for TermStream<'_> {
    type Item = Term;

    fn next(&mut self) -> Option<Term> {
        loop {
            if self.size >= 1 {
                if let Some(t) = self.levels[self.size].get(self.index) {
                    self.index += 1;
                    return Some(t.clone());
                }
            }
            if self.size >= self.max_size {
                return None;
            }
            self.size += 1;
            self.index = 0;
            self.build_level(self.size);
        }
    }
}
