//! Mal'cev terms, Hagemann-Mitschke chains, and shortening a chain.

use freealg::malcev::{construct_s_via_malcev, find_hm_chain, find_malcev_term, shorten_chain};
use freealg::{parse_term, parse_theory, Budget, Engine};

pub fn run_example() -> (String, String, String) {
    let g = Engine::new(parse_theory(include_str!("../theories/groups.th")).unwrap(), Budget::default());
    let th = g.theory();
    let m = find_malcev_term(&g, 7).expect("groups have a Mal'cev term");
    println!("malcev term: {}", th.show(&m));

    let sig = th.signature();
    let p = parse_term(sig, "mul(z, mul(inv(y), x))").unwrap();
    let q = parse_term(sig, "z").unwrap();
    let w = construct_s_via_malcev(&g, &m, &p, &q).unwrap();
    let s = w.proved().expect("s verifies").s.clone();
    println!("s = {}", th.show(&s));

    let chain = vec![m.clone(), q];
    let shorter = shorten_chain(&g, &chain, 7).unwrap();
    let m2 = &shorter.proved().expect("shortened")[0];
    println!("shortened chain: [{}]", th.show(m2));

    let h = Engine::new(parse_theory(include_str!("../theories/hm3.th")).unwrap(), Budget::default());
    let c = find_hm_chain(&h, 3, 4).expect("hm3 is 3-permutable");
    let shown: Vec<String> = c.iter().map(|t| h.theory().show(t)).collect();
    println!("hm3 chain: {}", shown.join("; "));
    (th.show(&m), th.show(&s), th.show(m2))
}

#[allow(dead_code)]
fn main() {
    run_example();
}
