//! Lifting a pullback through the free-algebra functor of the Mal'cev
//! theory.

use freealg::finset::{check_weak_preservation, DiagramSpec};
use freealg::{parse_theory, Budget, Engine};

pub fn run_example() -> (&'static str, usize) {
    let e = Engine::new(parse_theory(include_str!("../theories/malcev.th")).unwrap(), Budget::default());
    let d = DiagramSpec::from_json(include_str!("../diagrams/epi.json")).unwrap().pullback().unwrap();
    let p = check_weak_preservation(&e, &d, 4, 8);
    for w in &p.report.witnesses {
        let th = e.theory();
        println!("  ({}, {}) <- {}", th.show(&w.u1), th.show(&w.u2), th.show(&w.w));
    }
    println!("{} with {} lifted pairs", p.verdict.label(), p.report.witnesses.len());
    (p.verdict.label(), p.report.witnesses.len())
}

#[allow(dead_code)]
fn main() {
    run_example();
}
