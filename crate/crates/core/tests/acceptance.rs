//! Acceptance criteria, one PASS/FAIL line each. Runs without the test
//! harness so the lines always reach the output.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use common::{free_group, theory, z2};
use freealg::derivative::derivative_scan;
use freealg::engine::{eval_term, Budget, Engine, Verdict};
use freealg::finset::{
    all_maps, check_weak_preservation, is_pullback, is_weak_pullback, kernel_pair, pullback, weak_kernel_transport,
    FinSetMap, PullbackDiagram,
};
use freealg::malcev::{
    construct_s_via_malcev, find_malcev_term, is_malcev, malcev_equations, shorten_chain, check_chain,
};
use freealg::{parse_term, Term};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn run_freealg(args: &[&str]) -> (i32, serde_json::Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_freealg")).args(args).output().expect("binary runs");
    let code = out.status.code().unwrap_or(-1);
    let json = serde_json::from_slice(&out.stdout).unwrap_or(serde_json::Value::Null);
    (code, json)
}

fn theory_path(file: &str) -> String {
    format!("{}/theories/{file}", env!("CARGO_MANIFEST_DIR"))
}

fn malcev_search() -> Check {
    let groups = theory_path("groups.th");
    let (code, report) = run_freealg(&["--json", "malcev", &groups, "--bound", "7"]);
    ensure(code == 0, format!("exit code {code}"))?;
    let th = theory("groups.th");
    let sig = th.signature();
    let shown = report["witnesses"][0]["term"].as_str().ok_or("no witness term")?;
    let t = parse_term(sig, shown).map_err(|e| e.to_string())?;
    let expected = parse_term(sig, "mul(x, mul(inv(y), z))").unwrap();
    ensure(
        free_group(sig, &t) == free_group(sig, &expected),
        format!("{shown} is not x y^-1 z in the free group"),
    )?;
    let checks = report["checks"].as_array().ok_or("no checks")?;
    ensure(checks.len() == 2, "expected two Mal'cev equations")?;
    for c in checks {
        let eq = c["equation"].as_str().unwrap();
        let (code, _) = run_freealg(&["--json", "prove", &groups, eq]);
        ensure(code == 0, format!("`prove {eq}` exited {code}"))?;
    }
    Ok(format!("found {shown}, both equations proved, free-group oracle agrees"))
}

fn group_preimages() -> Check {
    let th = theory("groups.th");
    let sig = th.signature().clone();
    let e = Engine::new(th, Budget::default());
    let r = derivative_scan(&e, 6, 3);
    ensure(r.overall.is_refuted(), format!("overall verdict {}", r.overall.label()))?;
    let m = parse_term(&sig, "mul(x, mul(inv(z1), z2))").unwrap();
    let m_word = free_group(&sig, &m);
    let entry = r
        .entries
        .iter()
        .find(|en| {
            free_group(&sig, &en.term) == m_word && en.term.at(&en.path) == Some(&Term::var("x")) && en.path == m.var_positions()[0]
        })
        .ok_or("the Mal'cev term is not among the weakly independent occurrences")?;
    let target = &entry.witness.target;
    ensure(*target == Term::Var(entry.witness.y.clone()), format!("target is {}", e.theory().show(target)))?;
    let c = entry.independence.refuted().ok_or("independence of the Mal'cev term not refuted")?;
    ensure(c.algebra.size() <= 2, format!("countermodel of size {}", c.algebra.size()))?;
    ensure(c.algebra.is_model_of(e.theory()), "countermodel is not a group")?;
    // read the countermodel as Z2: the identity is 0
    let e_sym = sig.lookup("e").unwrap();
    let zero = c.algebra.apply(e_sym, &[]);
    let rho: BTreeMap<String, u8> = c
        .assignment
        .iter()
        .map(|(v, k)| (v.to_string(), u8::from(*k != zero)))
        .collect();
    ensure(
        z2(&sig, &entry.equation.lhs, &rho) != z2(&sig, &entry.equation.rhs, &rho),
        "assignment does not separate the sides in Z2",
    )?;
    let first = r.refuting_entry().unwrap();
    Ok(format!(
        "{} weakly independent of its first x via q(y) = y, independence fails in Z2; first refuting entry {}",
        e.theory().show(&entry.term),
        e.theory().show(&first.term)
    ))
}

/// Binary trees over `leaves` leaves: the shapes of semilattice terms.
fn shapes(leaves: usize) -> usize {
    if leaves == 1 {
        1
    } else {
        (1..leaves).map(|k| shapes(k) * shapes(leaves - k)).sum()
    }
}

fn semilattice_preimages() -> Check {
    let th = theory("semilattice.th");
    let e = Engine::new(th, Budget::default());
    let r = derivative_scan(&e, 5, 5);
    ensure(r.overall.is_proved(), format!("overall verdict {}", r.overall.label()))?;
    ensure(r.entries.is_empty(), format!("{} entries", r.entries.len()))?;
    // Subset oracle: p[x, v] always contains x, while every q(y) is {y}, so
    // no occurrence can be weakly independent. Count what the scan covered.
    let expected_occurrences: usize = (1..=3).map(|leaves| shapes(leaves) * leaves).sum();
    ensure(
        r.occurrences_scanned == expected_occurrences,
        format!("scanned {} occurrences, expected {expected_occurrences}", r.occurrences_scanned),
    )?;
    Ok(format!(
        "0 of {} occurrences weakly independent; subset semantics rules all out",
        r.occurrences_scanned
    ))
}

fn lemma_pullback() -> Check {
    let a = ["x", "y", "z"];
    let c = ["x", "z"];
    let phi = FinSetMap::from_pairs(&a, &c, &[("x", "x"), ("y", "x"), ("z", "z")]).map_err(|e| e.to_string())?;
    let psi = FinSetMap::from_pairs(&a, &c, &[("x", "x"), ("y", "z"), ("z", "z")]).map_err(|e| e.to_string())?;
    let d = pullback(&phi, &psi).map_err(|e| e.to_string())?;
    let got = d.apex_pairs();
    let want = vec![("x", "x"), ("y", "x"), ("z", "y"), ("z", "z")];
    ensure(got == want, format!("got {got:?}"))?;
    Ok("{(x,x), (y,x), (z,y), (z,z)}".to_string())
}

fn constructive_s() -> Check {
    let th = theory("groups.th");
    let sig = th.signature().clone();
    let e = Engine::new(th, Budget::default());
    let m = find_malcev_term(&e, 7).ok_or("no Mal'cev term")?;
    let p = parse_term(&sig, "mul(z, mul(inv(y), x))").unwrap();
    let q = parse_term(&sig, "z").unwrap();
    let v = construct_s_via_malcev(&e, &m, &p, &q).map_err(|e| e.to_string())?;
    let w = v.proved().ok_or("s did not verify")?;
    for eq in w.equations() {
        ensure(e.prove(&eq).is_proved(), format!("{} not proved", e.theory().show_eq(&eq)))?;
    }
    let closed = parse_term(&sig, "mul(u, mul(inv(y), x))").unwrap();
    ensure(free_group(&sig, &w.s) == free_group(&sig, &closed), "s differs from u y^-1 x in the free group")?;
    let same = freealg::Equation::new(w.s.clone(), closed);
    ensure(e.prove(&same).is_proved(), "s = u y^-1 x not proved")?;
    Ok(format!("s = {}, provably u y^-1 x", e.theory().show(&w.s)))
}

fn chain_shortening() -> Check {
    let th = theory("groups.th");
    let sig = th.signature().clone();
    let e = Engine::new(th, Budget::default());
    let chain = vec![
        parse_term(&sig, "mul(x, mul(inv(y), z))").unwrap(),
        parse_term(&sig, "z").unwrap(),
    ];
    check_chain(&e, &chain).map_err(|e| format!("input chain: {e}"))?;
    let v = shorten_chain(&e, &chain, 7).map_err(|e| e.to_string())?;
    let shorter = v.proved().ok_or("shortening gave no chain")?;
    ensure(shorter.len() == 1, format!("{} terms", shorter.len()))?;
    check_chain(&e, shorter).map_err(|e| format!("output chain: {e}"))?;
    let m = &shorter[0];
    ensure(is_malcev(&e, m), "not a Mal'cev term")?;
    for eq in malcev_equations(m) {
        ensure(e.prove(&eq).is_proved(), format!("{} not proved", e.theory().show_eq(&eq)))?;
    }
    let xyz = parse_term(&sig, "mul(x, mul(inv(y), z))").unwrap();
    ensure(free_group(&sig, m) == free_group(&sig, &xyz), "not x y^-1 z in the free group")?;
    Ok(format!("[x y^-1 z, z] shortened to [{}]", e.theory().show(m)))
}

fn sets() -> Vec<Vec<String>> {
    let labels = ["a", "b", "c"];
    (0..=3).map(|n| labels[..n].iter().map(|s| s.to_string()).collect()).collect()
}

/// All sections of a surjection.
fn sections(f: &FinSetMap) -> Vec<FinSetMap> {
    all_maps(f.cod(), f.dom()).into_iter().filter(|g| f.is_section(g)).collect()
}

fn finite_sets() -> Check {
    let mut pullbacks = 0;
    let mut transports = 0;
    for c in sets() {
        let maps: Vec<FinSetMap> = sets().iter().flat_map(|a| all_maps(a, &c)).collect();
        for f1 in &maps {
            for f2 in &maps {
                let d = pullback(f1, f2).map_err(|e| e.to_string())?;
                // brute-force compatible pairs
                let mut want = Vec::new();
                for i in 0..f1.dom().len() {
                    for j in 0..f2.dom().len() {
                        if f1.apply(i) == f2.apply(j) {
                            want.push((i, j));
                        }
                    }
                }
                ensure(d.pairs == want, "pullback pairs differ from brute force")?;
                let cone = d.cone();
                ensure(is_weak_pullback(&cone, f1, f2).map_err(|e| e.to_string())?, "pullback cone not weak")?;
                ensure(is_pullback(&cone, f1, f2).map_err(|e| e.to_string())?, "mediators not unique")?;
                pullbacks += 1;
                if f1.is_surjective() && f2.is_surjective() {
                    for g1 in sections(f1) {
                        for g2 in sections(f2) {
                            let t = weak_kernel_transport(f1, f2, &g1, &g2).map_err(|e| e.to_string())?;
                            ensure(
                                is_weak_pullback(&t.cone, f1, f2).map_err(|e| e.to_string())?,
                                "transported cone is not a weak pullback",
                            )?;
                            transports += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{pullbacks} pullbacks exact, {transports} transported cones weak pullbacks"))
}

fn malcev_diagrams() -> Vec<PullbackDiagram> {
    let mut out = Vec::new();
    let bases: Vec<Vec<String>> = sets().into_iter().skip(1).collect();
    let cods: Vec<Vec<String>> = (1..=3)
        .map(|n| ["s", "t", "u"][..n].iter().map(|l| l.to_string()).collect())
        .collect();
    for a in &bases {
        for c in &cods {
            for f in all_maps(a, c) {
                out.push(kernel_pair(&f));
            }
        }
    }
    for c in &cods {
        let epis: Vec<FinSetMap> = bases.iter().flat_map(|a| all_maps(a, c)).filter(|f| f.is_surjective()).collect();
        for f1 in &epis {
            for f2 in &epis {
                out.push(pullback(f1, f2).unwrap());
            }
        }
    }
    out
}

fn malcev_preservation() -> Check {
    let e = Engine::new(theory("malcev.th"), Budget::default());
    let diagrams = malcev_diagrams();
    let mut pairs = 0;
    for d in &diagrams {
        let p = check_weak_preservation(&e, d, 3, 7);
        if let Verdict::Unknown(u) = &p.verdict {
            return Err(format!("diagram with apex {:?}: {u}", d.apex()));
        }
        ensure(p.report.undecided_pairs == 0, "undecided compatibility")?;
        pairs += p.report.witnesses.len();
    }
    Ok(format!("{} diagrams, {pairs} compatible pairs all lifted", diagrams.len()))
}

fn soundness() -> Check {
    let queries = common::corpus(80, 0x5eed);
    let budget = Budget {
        max_steps: 20_000,
        ..Budget::default()
    };
    let mut engines: BTreeMap<&str, Engine> = BTreeMap::new();
    let (mut proved, mut refuted, mut unknown) = (0, 0, 0);
    for q in &queries {
        let e = engines.entry(q.theory).or_insert_with(|| Engine::new(theory(q.theory), budget));
        let th = e.theory();
        let eq = &q.equation;
        let p = e.prove(eq);
        let r = e.refute(eq);
        let shown = format!("{}: {}", q.theory, th.show_eq(eq));
        ensure(!(p.is_proved() && r.is_refuted()), format!("both verdicts on {shown}"))?;
        if let Verdict::Proved(proof) = &p {
            proof.replay(th, eq).map_err(|err| format!("{shown}: replay failed: {err}"))?;
            proved += 1;
        }
        if let Verdict::Refuted(c) = &r {
            let rho = c.rho();
            let l = eval_term(&c.algebra, &eq.lhs, &rho).map_err(|e| e.to_string())?;
            let rr = eval_term(&c.algebra, &eq.rhs, &rho).map_err(|e| e.to_string())?;
            ensure(l != rr, format!("{shown}: countermodel does not falsify"))?;
            ensure(c.algebra.is_model_of(th), format!("{shown}: countermodel is not a model"))?;
            refuted += 1;
        }
        if p.is_unknown() && r.is_unknown() {
            unknown += 1;
        }
        if q.derived {
            ensure(!r.is_refuted(), format!("{shown}: derived equation refuted"))?;
        }
        match common::oracle_holds(q.theory, th.signature(), eq) {
            Some(true) => ensure(!r.is_refuted(), format!("{shown}: oracle says it holds"))?,
            Some(false) => ensure(!p.is_proved(), format!("{shown}: oracle says it fails"))?,
            None => {}
        }
    }
    Ok(format!(
        "{} queries: {proved} proofs replay, {refuted} countermodels re-falsify, {unknown} unknown, no conflicts",
        queries.len()
    ))
}

/// Number, title, time limit in seconds, and the check itself.
type Criterion = (usize, &'static str, u64, fn() -> Check);

fn main() {
    let criteria: Vec<Criterion> = vec![
        (1, "Mal'cev term for groups", 60, malcev_search),
        (2, "groups do not preserve preimages", 120, group_preimages),
        (3, "semilattices preserve preimages up to bound", 60, semilattice_preimages),
        (4, "pullback of phi and psi", 1, lemma_pullback),
        (5, "constructive linking term s", 30, constructive_s),
        (6, "chain shortening", 60, chain_shortening),
        (7, "finite-set pullbacks and transport", 10, finite_sets),
        (8, "Mal'cev theory lifts kernel pairs and epi pullbacks", 600, malcev_preservation),
        (9, "engine soundness corpus", 600, soundness),
    ];
    let mut failed = 0;
    for (n, title, limit, f) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".to_string()));
        let took = start.elapsed();
        let result = match result {
            Ok(msg) if took > Duration::from_secs(limit) => Err(format!("{msg}; took longer than {limit}s")),
            other => other,
        };
        match result {
            Ok(msg) => println!("PASS {n} {title} ({:.2}s): {msg}", took.as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("FAIL {n} {title} ({:.2}s): {msg}", took.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
