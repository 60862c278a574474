//! Enumerating small models of a theory.

use freealg::{parse_theory, Budget, Engine};

pub fn run_example() -> Vec<(usize, usize)> {
    let th = parse_theory(include_str!("../theories/semilattice.th")).unwrap();
    let e = Engine::new(th, Budget::default());
    let mut counts = Vec::new();
    for n in 1..=3 {
        let models = e.find_models(n);
        let exact = models.iter().filter(|a| a.size() == n).count();
        println!("size {n}: {exact} labeled semilattices");
        counts.push((n, exact));
    }
    counts
}

#[allow(dead_code)]
fn main() {
    run_example();
}
