//! Deciding equations: a replayable derivation, a finite countermodel, or
//! an explicit "unknown".

use freealg::{parse_equation, parse_theory, Budget, Engine, Verdict};

const GROUPS: &str = include_str!("../theories/groups.th");

pub fn run_example() -> Vec<(String, &'static str)> {
    let th = parse_theory(GROUPS).expect("theory parses");
    let e = Engine::new(th, Budget::default());
    let sig = e.theory().signature().clone();
    let mut out = Vec::new();
    for text in [
        "inv(inv(x)) = x",
        "inv(mul(x, y)) = mul(inv(y), inv(x))",
        "mul(x, x) = e()",
        "mul(x, y) = mul(y, x)",
    ] {
        let eq = parse_equation(&sig, text).unwrap();
        let v = e.decide(&eq);
        match &v {
            Verdict::Proved(p) => {
                p.replay(e.theory(), &eq).expect("derivation replays");
                println!("{text}: proved in {} steps", p.len());
                for t in &p.terms {
                    println!("    {}", e.theory().show(t));
                }
            }
            Verdict::Refuted(c) => {
                assert!(c.validates(e.theory(), &eq));
                println!("{text}: refuted in a model of size {}", c.algebra.size());
            }
            Verdict::Unknown(u) => println!("{text}: unknown ({u})"),
        }
        out.push((text.to_string(), v.label()));
    }
    out
}

#[allow(dead_code)]
fn main() {
    run_example();
}
