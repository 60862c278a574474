mod common;

use std::collections::{BTreeMap, HashMap};

use common::{free_group, subset, theory};
use freealg::engine::{eval_term, find_models, Budget, Engine, FiniteAlgebra, Verdict};
use freealg::term::{name, names};
use freealg::{
    enumerate_terms, parse_equation, parse_term, parse_theory, ParseError, Signature, Substitution, Term,
};

#[test]
fn theory_files_parse() {
    let th = parse_theory("signature: m/3 equations: m(x,y,y)=x  m(x,x,y)=y").unwrap();
    assert_eq!(th.signature().len(), 1);
    assert_eq!(th.signature().arity(0), 3);
    assert_eq!(th.equations().len(), 2);

    let empty = parse_theory("signature: equations:").unwrap();
    assert!(empty.signature().is_empty());
    assert!(empty.equations().is_empty());

    let err = parse_theory("signature: f/2 equations: f(x)=x").unwrap_err();
    assert!(matches!(err, ParseError::ArityMismatch { .. }), "{err:?}");

    for file in common::CORPUS_THEORIES {
        let th = theory(file);
        for eq in th.equations() {
            let again = parse_equation(th.signature(), &th.show_eq(eq)).unwrap();
            assert_eq!(&again, eq);
        }
    }
}

#[test]
fn substitution() {
    let th = parse_theory("signature: m/3 f/2 equations:").unwrap();
    let sig = th.signature();
    let m = parse_term(sig, "m(x,y,z)").unwrap();
    let s = Substitution::from_pairs([(name("y"), Term::var("x"))]);
    assert_eq!(m.substitute(&s), parse_term(sig, "m(x,x,z)").unwrap());
    let fab = parse_term(sig, "f(a,b)").unwrap();
    let s = Substitution::from_pairs([(name("x"), fab.clone())]);
    assert_eq!(Term::var("x").substitute(&s), fab);
    assert_eq!(m.substitute(&Substitution::new()), m);
}

/// Number of terms of exactly `size` over `vars` variables, by arity.
fn count_exact(arities: &[usize], vars: usize, size: usize, memo: &mut HashMap<(usize, usize), u64>) -> u64 {
    if size == 0 {
        return 0;
    }
    let mut total = if size == 1 { vars as u64 } else { 0 };
    for &a in arities {
        total += forests(arities, vars, a, size - 1, memo);
    }
    total
}

/// Ordered sequences of `k` terms with total size `size`.
fn forests(arities: &[usize], vars: usize, k: usize, size: usize, memo: &mut HashMap<(usize, usize), u64>) -> u64 {
    if k == 0 {
        return u64::from(size == 0);
    }
    if let Some(&v) = memo.get(&(k, size)) {
        return v;
    }
    let mut total = 0;
    for first in 1..=size {
        let head = count_exact(arities, vars, first, &mut HashMap::new());
        if head > 0 {
            total += head * forests(arities, vars, k - 1, size - first, memo);
        }
    }
    memo.insert((k, size), total);
    total
}

#[test]
fn enumeration_counts() {
    let empty = Signature::new();
    let got: Vec<Term> = enumerate_terms(&empty, &names(&["x", "y"]), 3).collect();
    assert_eq!(got, vec![Term::var("x"), Term::var("y")]);

    let m = parse_theory("signature: m/3 equations:").unwrap();
    let got: Vec<Term> = enumerate_terms(m.signature(), &names(&["x"]), 4).collect();
    assert_eq!(got, vec![Term::var("x"), parse_term(m.signature(), "m(x,x,x)").unwrap()]);

    let g = theory("groups.th");
    let arities: Vec<usize> = g.signature().symbols().iter().map(|s| s.arity).collect();
    for bound in 1..=7 {
        for nvars in 0..=2 {
            let vars = &names(&["x", "y"])[..nvars];
            let expected: u64 = (1..=bound).map(|s| count_exact(&arities, nvars, s, &mut HashMap::new())).sum();
            let got = enumerate_terms(g.signature(), vars, bound).count() as u64;
            assert_eq!(got, expected, "bound {bound}, {nvars} variables");
        }
    }
}

#[test]
fn enumeration_is_sorted_and_distinct() {
    let g = theory("groups.th");
    let order = freealg::TermOrder::new(&names(&["x", "y"]));
    let terms: Vec<Term> = enumerate_terms(g.signature(), &names(&["x", "y"]), 6).collect();
    for w in terms.windows(2) {
        assert_eq!(order.compare(&w[0], &w[1]), std::cmp::Ordering::Less);
    }
}

fn engine(file: &str) -> Engine {
    Engine::new(theory(file), Budget::default())
}

fn eq(e: &Engine, s: &str) -> freealg::Equation {
    parse_equation(e.theory().signature(), s).unwrap()
}

#[test]
fn prove_examples() {
    let g = engine("groups.th");
    let q = eq(&g, "mul(x, mul(inv(x), y)) = y");
    let p = g.prove(&q).proved().cloned().expect("proved");
    p.replay(g.theory(), &q).unwrap();
    let sig = g.theory().signature();
    assert_eq!(free_group(sig, &q.lhs), free_group(sig, &q.rhs));

    let refl = eq(&g, "mul(x, y) = mul(x, y)");
    assert_eq!(g.prove(&refl).proved().unwrap().len(), 0);

    let m = engine("malcev.th");
    assert!(m.prove(&eq(&m, "m(x, x, x) = x")).is_proved());
    assert!(m.decide(&eq(&m, "m(x, y, y) = x")).is_proved());

    let empty = engine("empty.th");
    assert!(empty.decide(&eq(&empty, "x = x")).is_proved());
}

#[test]
fn refute_examples() {
    let g = engine("groups.th");
    let q = eq(&g, "mul(x, mul(inv(z1), z2)) = mul(y, mul(inv(z1), z2))");
    let c = g.refute(&q).refuted().cloned().expect("refuted");
    assert_eq!(c.algebra.size(), 2);
    assert!(c.validates(g.theory(), &q));

    let ab = engine("abelian.th");
    let q = eq(&ab, "mul(mul(x, z), inv(x)) = mul(mul(y, z), inv(y))");
    assert!(ab.refute(&q).is_unknown());
    assert!(ab.prove(&q).is_proved());

    let empty = engine("empty.th");
    let q = eq(&empty, "x = y");
    let c = empty.refute(&q).refuted().cloned().unwrap();
    assert_eq!(c.algebra.size(), 2);

    let comm = eq(&g, "mul(x, y) = mul(y, x)");
    assert!(g.decide(&comm).is_unknown());
}

#[test]
fn groups_need_six_elements_to_refute_commutativity() {
    let budget = Budget {
        max_model_size: 6,
        ..Budget::default()
    };
    let g = Engine::new(theory("groups.th"), budget);
    let comm = eq(&g, "mul(x, y) = mul(y, x)");
    let c = g.refute(&comm).refuted().cloned().expect("S3 refutes");
    assert_eq!(c.algebra.size(), 6);
    assert!(c.algebra.is_model_of(g.theory()));
    assert!(c.validates(g.theory(), &comm));
}

#[test]
fn normalize_examples() {
    let g = engine("groups.th");
    let t = parse_term(g.theory().signature(), "mul(x, mul(inv(x), y))").unwrap();
    assert_eq!(g.normalize(&t), Term::var("y"));

    let empty = engine("empty.th");
    assert_eq!(empty.normalize(&Term::var("x")), Term::var("x"));

    let s = engine("semilattice.th");
    let sig = s.theory().signature();
    let t = parse_term(sig, "and(and(x, y), x)").unwrap();
    let n = s.normalize(&t);
    assert_eq!(n, parse_term(sig, "and(x, y)").unwrap());
    assert_eq!(subset(&n), subset(&t));
}

/// Every labeled group structure on `{0..n}`, by brute force over tables.
fn groups_by_brute_force(n: usize) -> Vec<(Vec<usize>, Vec<usize>, usize)> {
    let mut out = Vec::new();
    let cells = n * n;
    let total_mul = n.pow(cells as u32);
    for code in 0..total_mul {
        let mul: Vec<usize> = (0..cells).map(|i| code / n.pow(i as u32) % n).collect();
        let m = |a: usize, b: usize| mul[a * n + b];
        let assoc = (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| m(m(a, b), c) == m(a, m(b, c)))));
        if !assoc {
            continue;
        }
        for e in 0..n {
            if !(0..n).all(|a| m(e, a) == a && m(a, e) == a) {
                continue;
            }
            let inv: Option<Vec<usize>> = (0..n).map(|a| (0..n).find(|&b| m(a, b) == e && m(b, a) == e)).collect();
            if let Some(inv) = inv {
                out.push((mul.clone(), inv, e));
            }
        }
    }
    out
}

#[test]
fn model_enumeration() {
    let g = theory("groups.th");
    let models = find_models(&g, 2);
    for n in 1..=2 {
        let ours: Vec<&FiniteAlgebra> = models.iter().filter(|a| a.size() == n).collect();
        let brute = groups_by_brute_force(n);
        assert_eq!(ours.len(), brute.len(), "size {n}");
        for a in ours {
            assert!(a.is_model_of(&g));
        }
    }

    let empty = theory("empty.th");
    let sets = parse_theory("signature: equations:").unwrap();
    let models = find_models(&sets, 2);
    assert_eq!(models.iter().map(|a| a.size()).collect::<Vec<_>>(), vec![1, 2]);
    assert!(find_models(&empty, 2).iter().all(|a| a.is_model_of(&empty)));

    let cd = parse_theory("signature: c/0 d/0 equations: c() = d()").unwrap();
    assert_eq!(find_models(&cd, 2).iter().filter(|a| a.size() == 2).count(), 2);
}

#[test]
fn evaluation() {
    let g = theory("groups.th");
    let sig = g.signature();
    // Z2: e = 0, inv = id, mul = xor
    let z2 = FiniteAlgebra::new(sig, 2, vec![vec![0, 1, 1, 0], vec![0, 1], vec![0]]).unwrap();
    assert!(z2.is_model_of(&g));
    let rho = |pairs: &[(&str, usize)]| -> HashMap<_, _> { pairs.iter().map(|(v, k)| (name(v), *k)).collect() };
    let t = parse_term(sig, "mul(x, inv(y))").unwrap();
    assert_eq!(eval_term(&z2, &t, &rho(&[("x", 1), ("y", 1)])).unwrap(), 0);
    assert_eq!(eval_term(&z2, &Term::var("x"), &rho(&[("x", 1)])).unwrap(), 1);
    let m = parse_term(sig, "mul(x, mul(inv(y), z))").unwrap();
    assert_eq!(eval_term(&z2, &m, &rho(&[("x", 1), ("y", 0), ("z", 1)])).unwrap(), 0);
    assert!(eval_term(&z2, &m, &rho(&[("x", 1)])).is_err());
    let zmap: BTreeMap<String, u8> = [("x", 1), ("y", 0), ("z", 1)].iter().map(|(v, k)| (v.to_string(), *k)).collect();
    assert_eq!(common::z2(sig, &m, &zmap), 0);
}

#[test]
fn budgets_are_monotone() {
    let small = Budget {
        max_term_size: 7,
        max_steps: 2_000,
        max_model_size: 2,
    };
    let large = Budget {
        max_term_size: 9,
        max_steps: 20_000,
        max_model_size: 3,
    };
    let mut engines: BTreeMap<&str, (Engine, Engine)> = BTreeMap::new();
    for q in common::corpus(30, 7) {
        let (a, b) = engines
            .entry(q.theory)
            .or_insert_with(|| (Engine::new(theory(q.theory), small), Engine::new(theory(q.theory), large)));
        let lo = a.decide(&q.equation);
        let hi = b.decide(&q.equation);
        let shown = a.theory().show_eq(&q.equation);
        match lo {
            Verdict::Proved(_) => assert!(hi.is_proved(), "{}: {shown} lost its proof", q.theory),
            Verdict::Refuted(_) => assert!(hi.is_refuted(), "{}: {shown} lost its countermodel", q.theory),
            Verdict::Unknown(_) => {}
        }
    }
}

#[test]
fn without_catalog_agrees_with_catalog() {
    let budget = Budget {
        max_steps: 20_000,
        ..Budget::default()
    };
    for file in ["groups.th", "semilattice.th"] {
        let exact = Engine::new(theory(file), budget);
        let generic = Engine::without_catalog(theory(file), budget);
        assert!(exact.normalizer_kind().is_some());
        assert!(generic.normalizer_kind().is_none());
        for q in common::corpus(20, 11).into_iter().filter(|q| q.theory == file) {
            let g = generic.decide(&q.equation);
            let x = exact.decide(&q.equation);
            if g.is_proved() {
                assert!(!x.is_refuted());
            }
            if g.is_refuted() {
                assert!(!x.is_proved());
            }
        }
    }
}
