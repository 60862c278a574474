//! Pullbacks of finite sets and the kernel-pair transport.

use freealg::finset::{is_pullback, is_weak_pullback, pullback, weak_kernel_transport, FinSetMap};

pub fn run_example() -> Vec<(String, String)> {
    let a = ["x", "y", "z"];
    let c = ["x", "z"];
    let phi = FinSetMap::from_pairs(&a, &c, &[("x", "x"), ("y", "x"), ("z", "z")]).unwrap();
    let psi = FinSetMap::from_pairs(&a, &c, &[("x", "x"), ("y", "z"), ("z", "z")]).unwrap();

    let d = pullback(&phi, &psi).unwrap();
    let pairs: Vec<(String, String)> = d
        .apex_pairs()
        .into_iter()
        .map(|(l, r)| (l.to_string(), r.to_string()))
        .collect();
    println!("pullback: {pairs:?}");
    assert!(is_pullback(&d.cone(), &phi, &psi).unwrap());

    let t = weak_kernel_transport(&phi, &psi, &phi.section().unwrap(), &psi.section().unwrap()).unwrap();
    let weak = is_weak_pullback(&t.cone, &phi, &psi).unwrap();
    let strict = is_pullback(&t.cone, &phi, &psi).unwrap();
    println!("transported cone has {} elements; weak pullback: {weak}, pullback: {strict}", t.cone.apex.len());
    pairs
}

#[allow(dead_code)]
fn main() {
    run_example();
}
