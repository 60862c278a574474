mod common;

use std::collections::BTreeSet;

use common::{abelian, free_group, subset, theory};
use freealg::engine::{Budget, Engine};
use freealg::free::{free_algebra, functor_map, is_idempotent, one_generator_is_trivial};
use freealg::term::{name, names};
use freealg::{enumerate_terms, parse_term, Name, Substitution, Term};

fn engine(file: &str) -> Engine {
    Engine::new(theory(file), Budget::default())
}

#[test]
fn small_carriers() {
    let empty = engine("empty.th");
    let sets = Engine::new(freealg::parse_theory("signature: equations:").unwrap(), Budget::default());
    let c = free_algebra(&sets, &names(&["x", "y"]), 3);
    assert_eq!(c.elements, vec![Term::var("x"), Term::var("y")]);
    // one binary operation, no equations: every term is its own class
    let c = free_algebra(&empty, &names(&["x", "y"]), 3);
    assert_eq!(c.len(), 2 + 4);

    let s = engine("semilattice.th");
    let c = free_algebra(&s, &names(&["x", "y"]), 4);
    let and_xy = parse_term(s.theory().signature(), "and(x, y)").unwrap();
    assert_eq!(c.elements, vec![Term::var("x"), Term::var("y"), and_xy]);

    let m = engine("malcev.th");
    let c = free_algebra(&m, &names(&["x"]), 4);
    assert_eq!(c.elements, vec![Term::var("x")]);
    assert!(one_generator_is_trivial(&m, 7).is_proved());
}

#[test]
fn semilattice_carriers_are_nonempty_subsets() {
    let s = engine("semilattice.th");
    for n in 1..=4 {
        let vars: Vec<Name> = names(&["a", "b", "c", "d"])[..n].to_vec();
        // a subset of k variables needs a term of size 2k - 1
        let c = free_algebra(&s, &vars, 2 * n - 1);
        assert_eq!(c.len(), (1 << n) - 1);
        let denotations: BTreeSet<BTreeSet<String>> = c.elements.iter().map(subset).collect();
        assert_eq!(denotations.len(), c.len());
    }
}

/// Carrier sizes against the number of distinct oracle values among all
/// enumerated terms up to the bound.
#[test]
fn group_carriers_match_reduced_words() {
    let g = engine("groups.th");
    let sig = g.theory().signature();
    for (vars, bound) in [(names(&["x"]), 6), (names(&["x", "y"]), 5)] {
        let c = free_algebra(&g, &vars, bound);
        let words: BTreeSet<_> = enumerate_terms(sig, &vars, bound).map(|t| free_group(sig, &t)).collect();
        assert_eq!(c.len(), words.len(), "{vars:?} up to {bound}");
        let ours: BTreeSet<_> = c.elements.iter().map(|t| free_group(sig, t)).collect();
        assert_eq!(ours, words);
        assert!(!c.uncertain);
    }

    let ab = engine("abelian.th");
    let sig = ab.theory().signature();
    let vars = names(&["x", "y"]);
    let c = free_algebra(&ab, &vars, 5);
    let vectors: BTreeSet<_> = enumerate_terms(sig, &vars, 5).map(|t| abelian(sig, &t)).collect();
    assert_eq!(c.len(), vectors.len());
}

#[test]
fn carriers_without_catalog() {
    // generic dedup must give the same classes as the exact normalizer
    let budget = Budget::default();
    let exact = Engine::new(theory("semilattice.th"), budget);
    let generic = Engine::without_catalog(theory("semilattice.th"), budget);
    let vars = names(&["x", "y"]);
    let a = free_algebra(&exact, &vars, 5);
    let b = free_algebra(&generic, &vars, 5);
    let da: BTreeSet<_> = a.elements.iter().map(subset).collect();
    let db: BTreeSet<_> = b.elements.iter().map(subset).collect();
    assert_eq!(da, db);
    assert_eq!(a.len(), b.len());
}

#[test]
fn functor_on_maps() {
    let g = engine("groups.th");
    let sig = g.theory().signature();
    let t = parse_term(sig, "mul(x, inv(y))").unwrap();
    let both_to_x = Substitution::from_pairs([(name("y"), Term::var("x"))]);
    assert_eq!(functor_map(&g, &both_to_x, &t, &names(&["x"])), parse_term(sig, "e()").unwrap());

    let s = engine("semilattice.th");
    let sig = s.theory().signature();
    let t = parse_term(sig, "and(x, y)").unwrap();
    let to_z = Substitution::from_pairs([(name("x"), Term::var("z")), (name("y"), Term::var("z"))]);
    assert_eq!(functor_map(&s, &to_z, &t, &names(&["z"])), Term::var("z"));

    // identity map fixes canonical elements
    let vars = names(&["x", "y"]);
    let id = Substitution::renaming(&vars, &vars);
    for u in free_algebra(&g, &vars, 5).elements {
        assert_eq!(functor_map(&g, &id, &u, &vars), u);
    }
}

#[test]
fn functor_composes() {
    for file in ["groups.th", "semilattice.th", "abelian.th", "malcev.th"] {
        let e = engine(file);
        let x = names(&["a", "b", "c"]);
        let y = names(&["p", "q"]);
        let z = names(&["r"]);
        let phi = Substitution::from_pairs([
            (name("a"), Term::var("p")),
            (name("b"), Term::var("q")),
            (name("c"), Term::var("p")),
        ]);
        let psi = Substitution::from_pairs([(name("p"), Term::var("r")), (name("q"), Term::var("r"))]);
        let composite = psi.after(&phi);
        for u in free_algebra(&e, &x, 4).elements {
            let direct = functor_map(&e, &composite, &u, &z);
            let stepwise = functor_map(&e, &psi, &functor_map(&e, &phi, &u, &y), &z);
            assert!(
                e.decide(&freealg::Equation::new(direct.clone(), stepwise.clone())).is_proved(),
                "{file}: {} vs {}",
                e.theory().show(&direct),
                e.theory().show(&stepwise)
            );
        }
    }
}

#[test]
fn idempotency() {
    assert!(is_idempotent(&engine("lattice.th")).is_proved());
    assert!(is_idempotent(&engine("malcev.th")).is_proved());
    assert!(is_idempotent(&engine("semilattice.th")).is_proved());

    let g = engine("groups.th");
    let failure = is_idempotent(&g).refuted().cloned().expect("groups are not idempotent");
    assert!(failure.countermodel.validates(g.theory(), &failure.equation));
    assert!(failure.countermodel.algebra.size() <= 2);
    assert!(!one_generator_is_trivial(&g, 5).is_proved());
}

#[test]
fn carriers_grow_with_the_bound() {
    for file in ["groups.th", "semilattice.th", "empty.th", "malcev.th"] {
        let e = engine(file);
        let vars = names(&["x", "y"]);
        let mut prev = free_algebra(&e, &vars, 1);
        for bound in 2..=5 {
            let next = free_algebra(&e, &vars, bound);
            assert!(prev.elements.iter().all(|u| next.contains(u)), "{file} at {bound}");
            prev = next;
        }
    }
}
