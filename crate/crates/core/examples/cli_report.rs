//! Driving the command-line front end in-process and reading its JSON.

pub fn run_example() -> (i32, serde_json::Value) {
    let dir = env!("CARGO_MANIFEST_DIR");
    let out = freealg::cli::run([
        "freealg".to_string(),
        "--json".to_string(),
        "check-preimages".to_string(),
        format!("{dir}/theories/groups.th"),
        "--q-bound".to_string(),
        "3".to_string(),
    ]);
    let report: serde_json::Value = serde_json::from_str(&out.stdout).expect("report is JSON");
    println!("exit {}: {}", out.code, report["summary"]);
    for c in report["checks"].as_array().unwrap() {
        println!("  {} expect {}", c["equation"], c["expect"]);
    }
    (out.code, report)
}

#[allow(dead_code)]
fn main() {
    run_example();
}
