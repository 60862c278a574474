//! Kernel-pair verdicts for a few theories.

use freealg::malcev::{kernel_pair_report, KernelPairVerdict};
use freealg::{parse_theory, Budget, Engine};

fn kind(v: &KernelPairVerdict) -> &'static str {
    match v {
        KernelPairVerdict::ProvedByMalcevTerm(_) => "proved by Mal'cev term",
        KernelPairVerdict::ProvedUpToBound { .. } => "proved up to bound",
        KernelPairVerdict::EvidenceAgainst { .. } => "evidence against",
        KernelPairVerdict::NecessaryConditionOpen => "necessary condition open",
        KernelPairVerdict::Unknown => "unknown",
    }
}

pub fn run_example() -> Vec<(&'static str, &'static str)> {
    let theories = [
        // (name, theory, pair_bound, s_bound)
        ("groups", include_str!("../theories/groups.th"), 3, 7),
        ("empty", include_str!("../theories/empty.th"), 3, 5),
        ("hm3", include_str!("../theories/hm3.th"), 4, 5),
    ];
    let mut out = Vec::new();
    for (label, text, pair_bound, s_bound) in theories {
        let e = Engine::new(parse_theory(text).unwrap(), Budget::default());
        let r = kernel_pair_report(&e, pair_bound, s_bound);
        println!(
            "{label}: {} ({} compatible pairs, {} linked, {} diagrams lifted)",
            kind(&r.verdict),
            r.pairs_compatible,
            r.pairs_linked,
            r.diagrams_lifted
        );
        out.push((label, kind(&r.verdict)));
    }
    out
}

#[allow(dead_code)]
fn main() {
    run_example();
}
