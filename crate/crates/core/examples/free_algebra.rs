//! Bounded free algebras, the functor on maps, and idempotency.

use freealg::free::{free_algebra, functor_map, is_idempotent};
use freealg::term::{name, names};
use freealg::{parse_term, parse_theory, Budget, Engine, Substitution, Term};

pub fn run_example() -> (usize, String, bool, bool) {
    let sl = Engine::new(parse_theory(include_str!("../theories/semilattice.th")).unwrap(), Budget::default());
    // nonempty subsets of {x, y, z}
    let c = free_algebra(&sl, &names(&["x", "y", "z"]), 7);
    for t in &c.elements {
        println!("  {}", sl.theory().show(t));
    }

    let g = Engine::new(parse_theory(include_str!("../theories/groups.th")).unwrap(), Budget::default());
    let t = parse_term(g.theory().signature(), "mul(mul(x, y), inv(z))").unwrap();
    // collapse z onto y
    let phi = Substitution::from_pairs([(name("z"), Term::var("y"))]);
    let image = functor_map(&g, &phi, &t, &names(&["x", "y"]));
    let image = g.theory().show(&image);
    println!("F(z -> y) sends {} to {image}", g.theory().show(&t));

    let m = Engine::new(parse_theory(include_str!("../theories/malcev.th")).unwrap(), Budget::default());
    let m_idem = is_idempotent(&m).is_proved();
    let g_idem = is_idempotent(&g).is_proved();
    println!("malcev idempotent: {m_idem}, groups idempotent: {g_idem}");
    (c.len(), image, m_idem, g_idem)
}

#[allow(dead_code)]
fn main() {
    run_example();
}
