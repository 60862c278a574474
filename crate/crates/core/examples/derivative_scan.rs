//! Weak independence against independence: groups fail, semilattices pass.

use freealg::derivative::derivative_scan;
use freealg::{parse_theory, Budget, Engine};

pub fn run_example() -> (&'static str, &'static str) {
    let g = Engine::new(parse_theory(include_str!("../theories/groups.th")).unwrap(), Budget::default());
    let r = derivative_scan(&g, 5, 3);
    println!(
        "groups: {} ({} weakly independent occurrences among {})",
        r.overall.label(),
        r.entries.len(),
        r.occurrences_scanned
    );
    if let Some(en) = r.refuting_entry() {
        let th = g.theory();
        println!("  {} = {}", th.show(&en.witness.instance), th.show(&en.witness.target));
        println!("  but {} fails", th.show_eq(&en.equation));
    }

    let s = Engine::new(parse_theory(include_str!("../theories/semilattice.th")).unwrap(), Budget::default());
    let r2 = derivative_scan(&s, 5, 5);
    println!("semilattices: {} ({} entries)", r2.overall.label(), r2.entries.len());
    (r.overall.label(), r2.overall.label())
}

#[allow(dead_code)]
fn main() {
    run_example();
}
