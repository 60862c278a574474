//! Reference semantics used as test oracles. Nothing here calls the
//! engine: terms are interpreted directly in concrete structures.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use freealg::{parse_theory, Signature, Term, Theory};

pub fn theory(file: &str) -> Theory {
    let path = format!("{}/theories/{file}", env!("CARGO_MANIFEST_DIR"));
    parse_theory(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn sym(sig: &Signature, f: usize) -> &str {
    &sig.symbol(f).name
}

/// Reduced word in the free group; letters are (generator, ±1).
pub type Word = Vec<(String, i8)>;

fn push_reduced(w: &mut Word, letter: (String, i8)) {
    if matches!(w.last(), Some((g, s)) if *g == letter.0 && *s == -letter.1) {
        w.pop();
    } else {
        w.push(letter);
    }
}

/// Interprets `mul`, `inv`, `e` in the free group on the variables.
pub fn free_group(sig: &Signature, t: &Term) -> Word {
    match t {
        Term::Var(v) => vec![(v.to_string(), 1)],
        Term::App(f, args) => match sym(sig, *f) {
            "e" => Vec::new(),
            "inv" => free_group(sig, &args[0]).into_iter().rev().map(|(g, s)| (g, -s)).collect(),
            "mul" => {
                let mut w = free_group(sig, &args[0]);
                for l in free_group(sig, &args[1]) {
                    push_reduced(&mut w, l);
                }
                w
            }
            other => panic!("not a group symbol: {other}"),
        },
    }
}

/// Interprets group terms in the free abelian group: exponent per variable.
pub fn abelian(sig: &Signature, t: &Term) -> BTreeMap<String, i64> {
    let mut out = BTreeMap::new();
    for (g, s) in free_group_unreduced(sig, t) {
        *out.entry(g).or_insert(0) += s as i64;
    }
    out.retain(|_, v| *v != 0);
    out
}

fn free_group_unreduced(sig: &Signature, t: &Term) -> Word {
    match t {
        Term::Var(v) => vec![(v.to_string(), 1)],
        Term::App(f, args) => match sym(sig, *f) {
            "e" => Vec::new(),
            "inv" => free_group_unreduced(sig, &args[0]).into_iter().map(|(g, s)| (g, -s)).collect(),
            "mul" => {
                let mut w = free_group_unreduced(sig, &args[0]);
                w.extend(free_group_unreduced(sig, &args[1]));
                w
            }
            other => panic!("not a group symbol: {other}"),
        },
    }
}

/// Semilattice terms as their sets of variables.
pub fn subset(t: &Term) -> BTreeSet<String> {
    t.vars().into_iter().map(|v| v.to_string()).collect()
}

/// Evaluates a `meet`/`join` term in the two-element lattice.
pub fn lattice2(sig: &Signature, t: &Term, rho: &BTreeMap<String, bool>) -> bool {
    match t {
        Term::Var(v) => rho[&**v],
        Term::App(f, args) => {
            let a = lattice2(sig, &args[0], rho);
            let b = lattice2(sig, &args[1], rho);
            match sym(sig, *f) {
                "meet" => a && b,
                "join" => a || b,
                other => panic!("not a lattice symbol: {other}"),
            }
        }
    }
}

/// Whether `l = r` holds in the two-element lattice.
pub fn lattice2_holds(sig: &Signature, l: &Term, r: &Term) -> bool {
    let vars: BTreeSet<String> = subset(l).union(&subset(r)).cloned().collect();
    let vars: Vec<String> = vars.into_iter().collect();
    (0..1u32 << vars.len()).all(|bits| {
        let rho = vars
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), bits >> i & 1 == 1))
            .collect();
        lattice2(sig, l, &rho) == lattice2(sig, r, &rho)
    })
}

/// Evaluates a group term in Z/2 under additive notation.
pub fn z2(sig: &Signature, t: &Term, rho: &BTreeMap<String, u8>) -> u8 {
    match t {
        Term::Var(v) => rho[&**v] % 2,
        Term::App(f, args) => match sym(sig, *f) {
            "e" => 0,
            "inv" => z2(sig, &args[0], rho),
            "mul" => (z2(sig, &args[0], rho) + z2(sig, &args[1], rho)) % 2,
            other => panic!("not a group symbol: {other}"),
        },
    }
}

pub const CORPUS_THEORIES: &[&str] = &[
    "groups.th",
    "abelian.th",
    "semilattice.th",
    "lattice.th",
    "malcev.th",
    "empty.th",
    "hm3.th",
];

pub struct Query {
    pub theory: &'static str,
    pub equation: freealg::Equation,
    /// Built as one axiom instance inside a context, so it is provable.
    pub derived: bool,
}

fn random_term(sig: &Signature, rng: &mut impl rand::Rng, vars: &[&str], depth: usize) -> Term {
    if depth == 0 || rng.gen_bool(0.3) {
        let consts: Vec<usize> = sig.constants().collect();
        if !consts.is_empty() && rng.gen_bool(0.15) {
            return Term::constant(consts[rng.gen_range(0..consts.len())]);
        }
        return Term::var(vars[rng.gen_range(0..vars.len())]);
    }
    let f = rng.gen_range(0..sig.len());
    let args = (0..sig.arity(f)).map(|_| random_term(sig, rng, vars, depth - 1)).collect();
    Term::app(f, args)
}

/// Replaces a random subterm of `t` by `hole`.
fn plug(t: &Term, hole: &Term, rng: &mut impl rand::Rng) -> (Term, Vec<usize>) {
    let positions = t.positions();
    let p = positions[rng.gen_range(0..positions.len())].clone();
    (t.replace_at(&p, hole.clone()), p)
}

/// A seeded corpus of small equations over every test theory, half random
/// pairs and half one-step consequences of an axiom.
pub fn corpus(per_theory: usize, seed: u64) -> Vec<Query> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let vars = ["x", "y", "z"];
    let mut out = Vec::new();
    for &name in CORPUS_THEORIES {
        let th = theory(name);
        let sig = th.signature();
        for i in 0..per_theory {
            if i % 2 == 0 || th.equations().is_empty() {
                let l = random_term(sig, &mut rng, &vars, 2);
                let r = random_term(sig, &mut rng, &vars, 2);
                out.push(Query {
                    theory: name,
                    equation: freealg::Equation::new(l, r),
                    derived: false,
                });
            } else {
                let ax = &th.equations()[rng.gen_range(0..th.equations().len())];
                let sigma = freealg::Substitution::from_pairs(
                    ax.vars()
                        .into_iter()
                        .map(|v| (v, random_term(sig, &mut rng, &vars, 1))),
                );
                let ctx = random_term(sig, &mut rng, &vars, 1);
                let (l, path) = plug(&ctx, &ax.lhs.substitute(&sigma), &mut rng);
                let r = l.replace_at(&path, ax.rhs.substitute(&sigma));
                out.push(Query {
                    theory: name,
                    equation: freealg::Equation::new(l, r),
                    derived: true,
                });
            }
        }
    }
    out
}

/// The oracle's opinion on an equation, where one is available: `Some(true)`
/// means it holds in every model of the theory.
pub fn oracle_holds(name: &str, sig: &Signature, eq: &freealg::Equation) -> Option<bool> {
    match name {
        "groups.th" => Some(free_group(sig, &eq.lhs) == free_group(sig, &eq.rhs)),
        "abelian.th" => Some(abelian(sig, &eq.lhs) == abelian(sig, &eq.rhs)),
        "semilattice.th" => Some(subset(&eq.lhs) == subset(&eq.rhs)),
        "empty.th" => Some(eq.lhs == eq.rhs),
        // the two-element lattice only refutes
        "lattice.th" if !lattice2_holds(sig, &eq.lhs, &eq.rhs) => Some(false),
        _ => None,
    }
}
