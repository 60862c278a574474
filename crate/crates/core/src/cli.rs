//! Command-line front end. `run` parses arguments, loads the theory file,
//! calls into the library and renders a [`Report`].

use std::collections::{BTreeMap, HashSet};
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::derivative::{self, DerivativeEntry};
use crate::engine::{Budget, Engine, Unknown, Verdict};
use crate::finset::{check_weak_preservation, kernel_pair, DiagramSpec, PullbackDiagram};
use crate::free;
use crate::malcev::{self, KernelPairVerdict};
use crate::parse::{parse_equation, parse_term, parse_term_list, parse_theory};
use crate::report::{self, check, countermodel_witness, model_witness, term_witness, Report, Status, Witness};
use crate::term::{fresh_name, name, Equation, Name, Substitution, Term, Theory};

#[derive(Debug, Parser)]
#[command(name = "freealg", version, about = "Bounded reasoning about free algebras of equational theories")]
pub struct Cli {
    /// Print the JSON report instead of the human summary.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(flatten)]
    pub budget: BudgetArgs,
    /// Use bounded search only, even for theories with a known normal form.
    #[arg(long, global = true)]
    pub no_catalog: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct BudgetArgs {
    #[arg(long, global = true, default_value_t = Budget::default().max_term_size)]
    pub max_term_size: usize,
    #[arg(long, global = true, default_value_t = Budget::default().max_steps)]
    pub max_steps: usize,
    #[arg(long, global = true, default_value_t = Budget::default().max_model_size)]
    pub max_model_size: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide an equation: derivation, countermodel, or unknown.
    Prove { file: PathBuf, equation: String },
    /// List the models of the theory up to a size.
    Models {
        file: PathBuf,
        #[arg(long)]
        size: usize,
    },
    /// Canonical elements of the free algebra over some variables.
    Free {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "x,y")]
        vars: Vec<String>,
        #[arg(long, default_value_t = 4)]
        bound: usize,
    },
    /// Whether every operation satisfies f(x,...,x) = x.
    Idempotent { file: PathBuf },
    /// Weak independence versus independence, over all small terms or for
    /// one occurrence.
    Derivative(DerivativeArgs),
    /// Same scan as `derivative`, summarized as a preimage verdict.
    CheckPreimages(DerivativeArgs),
    /// Search for a Mal'cev term.
    Malcev {
        file: PathBuf,
        #[arg(long, default_value_t = 7)]
        bound: usize,
    },
    /// Search for a Hagemann-Mitschke chain of n-1 ternary terms.
    HmChain {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 7)]
        bound: usize,
    },
    /// Shorten a chain by merging its first two terms.
    Shorten {
        file: PathBuf,
        /// Terms separated by `;`.
        #[arg(long)]
        chain: String,
        #[arg(long, default_value_t = 7)]
        s_bound: usize,
    },
    /// Kernel-pair witness condition and preservation verdict.
    KernelReport {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        pair_bound: usize,
        #[arg(long, default_value_t = 7)]
        s_bound: usize,
    },
    /// Lift a pullback of finite sets through the free-algebra functor.
    Preserve {
        file: PathBuf,
        #[arg(long)]
        diagram: PathBuf,
        /// Use the kernel pair of f1 instead of the pullback of f1 and f2.
        #[arg(long)]
        kernel: bool,
        #[arg(long, default_value_t = 3)]
        carrier_bound: usize,
        #[arg(long, default_value_t = 7)]
        witness_bound: usize,
    },
}

#[derive(Debug, Args)]
pub struct DerivativeArgs {
    pub file: PathBuf,
    #[arg(long, default_value_t = 5)]
    pub term_bound: usize,
    #[arg(long, default_value_t = 5)]
    pub q_bound: usize,
    /// Examine a single term instead of scanning.
    #[arg(long)]
    pub term: Option<String>,
    /// Variable of `--term` whose first occurrence is examined.
    #[arg(long, requires = "term", default_value = "x")]
    pub occurrence: String,
}

impl Command {
    fn file(&self) -> &Path {
        match self {
            Command::Prove { file, .. }
            | Command::Models { file, .. }
            | Command::Free { file, .. }
            | Command::Idempotent { file }
            | Command::Malcev { file, .. }
            | Command::HmChain { file, .. }
            | Command::Shorten { file, .. }
            | Command::KernelReport { file, .. }
            | Command::Preserve { file, .. } => file,
            Command::Derivative(a) | Command::CheckPreimages(a) => &a.file,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Command::Prove { .. } => "prove",
            Command::Models { .. } => "models",
            Command::Free { .. } => "free",
            Command::Idempotent { .. } => "idempotent",
            Command::Derivative(_) => "derivative",
            Command::CheckPreimages(_) => "check-preimages",
            Command::Malcev { .. } => "malcev",
            Command::HmChain { .. } => "hm-chain",
            Command::Shorten { .. } => "shorten",
            Command::KernelReport { .. } => "kernel-report",
            Command::Preserve { .. } => "preserve",
        }
    }
}

/// What a command produced besides the shared report header.
struct Body {
    verdict: Status,
    reason: Option<Unknown>,
    summary: String,
    detail: serde_json::Value,
    witnesses: Vec<Witness>,
    checks: Vec<report::Check>,
}

impl Body {
    fn new(verdict: Status, summary: impl Into<String>) -> Body {
        Body {
            verdict,
            reason: None,
            summary: summary.into(),
            detail: json!({}),
            witnesses: Vec::new(),
            checks: Vec::new(),
        }
    }
}

/// Printed output and exit code of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub const USAGE_ERROR: i32 = 3;

fn usage_error(msg: impl std::fmt::Display) -> Output {
    Output {
        code: USAGE_ERROR,
        stdout: String::new(),
        stderr: format!("error: {msg}\n"),
    }
}

/// Runs one invocation. `args` includes the program name.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output {
                    code: USAGE_ERROR,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                // --help and --version
                Output {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match build_report(&cli) {
        Ok(report) => Output {
            code: report.verdict.exit_code(),
            stdout: if cli.json { report.to_json() + "\n" } else { report.human() },
            stderr: String::new(),
        },
        Err(msg) => usage_error(msg),
    }
}

/// Loads the theory, runs the command and assembles the report. Errors are
/// usage, file or parse problems.
pub fn build_report(cli: &Cli) -> Result<Report, String> {
    let path = cli.command.file();
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let theory = parse_theory(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let budget = Budget {
        max_term_size: cli.budget.max_term_size,
        max_steps: cli.budget.max_steps,
        max_model_size: cli.budget.max_model_size,
    };
    let engine = if cli.no_catalog {
        Engine::without_catalog(theory, budget)
    } else {
        Engine::new(theory, budget)
    };
    let start = Instant::now();
    let body = run_command(&engine, &cli.command)?;
    Ok(Report {
        command: cli.command.name().to_string(),
        theory_hash: report::theory_hash(&text),
        budgets: budget,
        verdict: body.verdict,
        reason: body.reason,
        summary: body.summary,
        detail: body.detail,
        witnesses: body.witnesses,
        checks: body.checks,
        timing_ms: start.elapsed().as_millis() as u64,
    })
}

fn status_of<P, R>(v: &Verdict<P, R>) -> Status {
    match v {
        Verdict::Proved(_) => Status::Proved,
        Verdict::Refuted(_) => Status::Refuted,
        Verdict::Unknown(_) => Status::Unknown,
    }
}

fn reason_of<P, R>(v: &Verdict<P, R>) -> Option<Unknown> {
    match v {
        Verdict::Unknown(u) => Some(u.clone()),
        _ => None,
    }
}

fn run_command(e: &Engine, cmd: &Command) -> Result<Body, String> {
    let th = e.theory();
    let sig = th.signature();
    match cmd {
        Command::Prove { equation, .. } => {
            let eq = parse_equation(sig, equation).map_err(|e| e.to_string())?;
            Ok(prove_body(e, &eq))
        }
        Command::Models { size, .. } => {
            let models = e.find_models(*size);
            let mut b = Body::new(Status::Listed, format!("{} models of size at most {size}", models.len()));
            b.detail = json!({ "size": size, "count": models.len() });
            for (i, a) in models.iter().enumerate() {
                b.witnesses.push(model_witness(&format!("model {i}"), sig, a, &[]));
            }
            Ok(b)
        }
        Command::Free { vars, bound, .. } => {
            let vars: Vec<Name> = vars.iter().map(|v| name(v.trim())).collect();
            let c = free::free_algebra(e, &vars, *bound);
            let (status, summary) = if c.uncertain {
                (Status::Unknown, format!("{} elements up to size {bound}, some pairs undecided", c.len()))
            } else {
                (Status::Proved, format!("{} elements up to size {bound}", c.len()))
            };
            let mut b = Body::new(status, summary);
            if c.uncertain {
                b.reason = Some(Unknown::Exhausted {
                    dims: vec![crate::engine::BudgetDim::Steps, crate::engine::BudgetDim::ModelSize],
                });
            }
            b.detail = json!({
                "vars": vars.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                "bound": bound,
                "count": c.len(),
                "uncertain": c.uncertain,
            });
            b.witnesses = c.elements.iter().map(|t| term_witness("element", th.show(t))).collect();
            Ok(b)
        }
        Command::Idempotent { .. } => Ok(idempotent_body(e)),
        Command::Derivative(a) | Command::CheckPreimages(a) => {
            let preimages = matches!(cmd, Command::CheckPreimages(_));
            match &a.term {
                Some(t) => {
                    let p = parse_term(sig, t).map_err(|e| e.to_string())?;
                    let occ = derivative::first_occurrence(&p, &a.occurrence).map_err(|e| e.to_string())?;
                    Ok(drill_down_body(e, &p, &occ, a.q_bound))
                }
                None => Ok(scan_body(e, a.term_bound, a.q_bound, preimages)),
            }
        }
        Command::Malcev { bound, .. } => Ok(malcev_body(e, *bound)),
        Command::HmChain { n, bound, .. } => {
            if *n < 2 {
                return Err(format!("--n must be at least 2, got {n}"));
            }
            Ok(hm_chain_body(e, *n, *bound))
        }
        Command::Shorten { chain, s_bound, .. } => {
            let chain = parse_term_list(sig, chain).map_err(|e| e.to_string())?;
            let v = malcev::shorten_chain(e, &chain, *s_bound).map_err(|e| e.to_string())?;
            let mut b = Body::new(status_of(&v), String::new());
            b.reason = reason_of(&v);
            match &v {
                Verdict::Proved(shorter) => {
                    b.summary = format!("chain of {} terms shortened to {}", chain.len(), shorter.len());
                    b.witnesses = shorter.iter().map(|t| term_witness("chain term", th.show(t))).collect();
                    b.checks = malcev::chain_equations(shorter)
                        .iter()
                        .map(|eq| check(th, eq, Status::Proved))
                        .collect();
                }
                _ => b.summary = format!("no linking term up to size {s_bound}"),
            }
            b.detail = json!({ "s_bound": s_bound });
            Ok(b)
        }
        Command::KernelReport {
            pair_bound, s_bound, ..
        } => Ok(kernel_body(e, *pair_bound, *s_bound)),
        Command::Preserve {
            diagram,
            kernel,
            carrier_bound,
            witness_bound,
            ..
        } => {
            let text = std::fs::read_to_string(diagram).map_err(|err| format!("{}: {err}", diagram.display()))?;
            let spec = DiagramSpec::from_json(&text).map_err(|err| format!("{}: {err}", diagram.display()))?;
            let d = if *kernel {
                kernel_pair(&spec.maps().map_err(|err| err.to_string())?.0)
            } else {
                spec.pullback().map_err(|err| err.to_string())?
            };
            Ok(preserve_body(e, &d, *carrier_bound, *witness_bound))
        }
    }
}

fn prove_body(e: &Engine, eq: &Equation) -> Body {
    let th = e.theory();
    let v = e.decide(eq);
    let mut b = Body::new(status_of(&v), String::new());
    b.reason = reason_of(&v);
    match &v {
        Verdict::Proved(p) => {
            b.summary = format!("{} holds ({} rewrite steps)", th.show_eq(eq), p.len());
            b.detail = json!({ "trace": report::trace_json(th, p) });
        }
        Verdict::Refuted(c) => {
            b.summary = format!("{} fails in a model of size {}", th.show_eq(eq), c.algebra.size());
            b.witnesses.push(countermodel_witness("countermodel", th.signature(), c));
        }
        Verdict::Unknown(u) => b.summary = format!("{} undecided: {u}", th.show_eq(eq)),
    }
    b.checks.push(check(th, eq, b.verdict));
    b
}

fn idempotent_body(e: &Engine) -> Body {
    let th = e.theory();
    let v = free::is_idempotent(e);
    let mut b = Body::new(status_of(&v), String::new());
    b.reason = reason_of(&v);
    match &v {
        Verdict::Proved(proofs) => {
            b.summary = "every operation is idempotent".to_string();
            b.checks = proofs.iter().map(|(eq, _)| check(th, eq, Status::Proved)).collect();
        }
        Verdict::Refuted(f) => {
            b.summary = format!("`{}` is not idempotent", th.signature().symbol(f.symbol).name);
            b.witnesses.push(countermodel_witness("countermodel", th.signature(), &f.countermodel));
            b.checks.push(check(th, &f.equation, Status::Refuted));
        }
        Verdict::Unknown(u) => b.summary = format!("undecided: {u}"),
    }
    b
}

fn entry_json(th: &Theory, en: &DerivativeEntry) -> serde_json::Value {
    let w = &en.witness;
    json!({
        "term": th.show(&en.term),
        "path": en.path,
        "variable": w.x.to_string(),
        "assignment": w.assignment.iter().map(|(v, t)| (v.to_string(), th.show(t))).collect::<BTreeMap<_, _>>(),
        "weak_equation": th.show_eq(&w.equation()),
        "independence_equation": th.show_eq(&en.equation),
        "independence": en.independence.label(),
    })
}

fn scan_body(e: &Engine, term_bound: usize, q_bound: usize, preimages: bool) -> Body {
    let th = e.theory();
    let r = derivative::derivative_scan(e, term_bound, q_bound);
    let mut b = Body::new(status_of(&r.overall), String::new());
    b.reason = reason_of(&r.overall);
    b.summary = match (&r.overall, preimages) {
        (Verdict::Proved(()), true) => format!(
            "preserves preimages (verified up to bound: terms of size {term_bound}, targets of size {q_bound})"
        ),
        (Verdict::Refuted(_), true) => "does not preserve preimages".to_string(),
        (Verdict::Unknown(u), true) => format!("preimage preservation undecided: {u}"),
        (Verdict::Proved(()), false) => format!(
            "every weakly independent occurrence is independent (verified up to bound: terms of size {term_bound}, targets of size {q_bound})"
        ),
        (Verdict::Refuted(_), false) => "a weakly independent occurrence is not independent".to_string(),
        (Verdict::Unknown(u), false) => format!("undecided: {u}"),
    };
    b.detail = json!({
        "term_bound": r.scanned_bound,
        "q_bound": r.q_bound,
        "terms_scanned": r.terms_scanned,
        "occurrences_scanned": r.occurrences_scanned,
        "entries": r.entries.iter().map(|en| entry_json(th, en)).collect::<Vec<_>>(),
    });
    if let Some(en) = r.refuting_entry() {
        b.witnesses.push(term_witness("term", th.show(&en.term)));
        b.witnesses.push(term_witness("target", th.show(&en.witness.target)));
        if let Verdict::Refuted(c) = &en.independence {
            b.witnesses.push(countermodel_witness("countermodel", th.signature(), c));
        }
        b.checks.push(check(th, &en.witness.equation(), Status::Proved));
        b.checks.push(check(th, &en.equation, Status::Refuted));
    } else {
        for en in &r.entries {
            b.checks.push(check(th, &en.witness.equation(), Status::Proved));
            b.checks.push(check(th, &en.equation, status_of(&en.independence)));
        }
    }
    b
}

fn drill_down_body(e: &Engine, p: &Term, occ: &crate::term::VarOccurrence, q_bound: usize) -> Body {
    let th = e.theory();
    let imp = derivative::weak_implies_independent_for(e, p, occ, q_bound);
    let mut b = Body::new(status_of(&imp.verdict), String::new());
    b.reason = reason_of(&imp.verdict);
    let x = occ.variable();
    b.summary = match (&imp.weak, &imp.independence) {
        (_, Verdict::Proved(_)) => format!("{} is independent of {x}", th.show(p)),
        (Verdict::Proved(_), Verdict::Refuted(_)) => {
            format!("{} is weakly independent of {x} but not independent", th.show(p))
        }
        (Verdict::Unknown(_), _) => format!("no weak-independence witness for {x} up to size {q_bound}"),
        _ => "independence undecided".to_string(),
    };
    b.detail = json!({
        "term": th.show(p),
        "path": occ.path(),
        "weak": imp.weak.label(),
        "independence": imp.independence.label(),
    });
    b.witnesses.push(term_witness("term", th.show(p)));
    if let Verdict::Proved(w) = &imp.weak {
        b.witnesses.push(term_witness("target", th.show(&w.target)));
        b.checks.push(check(th, &w.equation(), Status::Proved));
    }
    if let Verdict::Refuted(c) = &imp.independence {
        b.witnesses.push(countermodel_witness("countermodel", th.signature(), c));
    }
    if !imp.independence.is_unknown() {
        b.checks.push(check(th, &imp.equation, status_of(&imp.independence)));
    }
    b
}

fn malcev_body(e: &Engine, bound: usize) -> Body {
    let th = e.theory();
    match malcev::find_malcev_term(e, bound) {
        Some(m) => {
            let mut b = Body::new(Status::Proved, format!("Mal'cev term {}", th.show(&m)));
            b.witnesses.push(term_witness("malcev term", th.show(&m)));
            b.checks = malcev::malcev_equations(&m)
                .iter()
                .map(|eq| check(th, eq, Status::Proved))
                .collect();
            b.detail = json!({ "bound": bound });
            b
        }
        None => {
            let mut b = Body::new(Status::Unknown, format!("no Mal'cev term up to size {bound}"));
            b.reason = Some(Unknown::NoWitness { bound });
            b.detail = json!({ "bound": bound });
            b
        }
    }
}

fn hm_chain_body(e: &Engine, n: usize, bound: usize) -> Body {
    let th = e.theory();
    let mut b = match malcev::find_hm_chain(e, n, bound) {
        Some(chain) => {
            let mut b = Body::new(Status::Proved, format!("{n}-permutability chain of {} terms", chain.len()));
            b.witnesses = chain.iter().map(|t| term_witness("chain term", th.show(t))).collect();
            b.checks = malcev::chain_equations(&chain)
                .iter()
                .map(|eq| check(th, eq, Status::Proved))
                .collect();
            b
        }
        None => {
            let mut b = Body::new(Status::Unknown, format!("no {n}-permutability chain up to size {bound}"));
            b.reason = Some(Unknown::NoWitness { bound });
            b
        }
    };
    b.detail = json!({ "n": n, "bound": bound });
    b
}

fn kernel_body(e: &Engine, pair_bound: usize, s_bound: usize) -> Body {
    let th = e.theory();
    let r = malcev::kernel_pair_report(e, pair_bound, s_bound);
    let (status, summary) = match &r.verdict {
        KernelPairVerdict::ProvedByMalcevTerm(m) => (
            Status::Proved,
            format!("weakly preserves kernel pairs: Mal'cev term {}", th.show(m)),
        ),
        KernelPairVerdict::ProvedUpToBound { diagrams } => (
            Status::Proved,
            format!(
                "weakly preserves kernel pairs (verified up to bound: {diagrams} diagrams, pairs of size {pair_bound}, linking terms of size {s_bound})"
            ),
        ),
        KernelPairVerdict::EvidenceAgainst { chain } => (
            Status::EvidenceAgainst,
            format!(
                "{}-permutable with no Mal'cev term up to size {s_bound}; for such theories kernel-pair preservation requires one",
                chain.len() + 1
            ),
        ),
        KernelPairVerdict::NecessaryConditionOpen => (
            Status::Unknown,
            format!(
                "{} compatible pairs have no linking term up to size {s_bound}",
                r.open_pairs.len()
            ),
        ),
        KernelPairVerdict::Unknown => (Status::Unknown, "undecided".to_string()),
    };
    let mut b = Body::new(status, summary);
    let verdict_name = match &r.verdict {
        KernelPairVerdict::ProvedByMalcevTerm(_) => "proved_by_malcev_term",
        KernelPairVerdict::ProvedUpToBound { .. } => "proved_up_to_bound",
        KernelPairVerdict::EvidenceAgainst { .. } => "evidence_against",
        KernelPairVerdict::NecessaryConditionOpen => "necessary_condition_open",
        KernelPairVerdict::Unknown => "unknown",
    };
    if status == Status::Unknown {
        b.reason = Some(match &r.verdict {
            KernelPairVerdict::NecessaryConditionOpen => {
                let (p, q) = &r.open_pairs[0];
                Unknown::NoWitnessForPair {
                    left: th.show(p),
                    right: th.show(q),
                    witness_bound: s_bound,
                }
            }
            _ => Unknown::Open {
                unresolved: r.open_pairs.len(),
            },
        });
    }
    b.detail = json!({
        "kind": verdict_name,
        "pair_bound": r.pair_bound,
        "s_bound": r.s_bound,
        "pairs_compatible": r.pairs_compatible,
        "pairs_linked": r.pairs_linked,
        "open_pairs": r.open_pairs.iter().map(|(p, q)| [th.show(p), th.show(q)]).collect::<Vec<_>>(),
        "diagrams_checked": r.diagrams_checked,
        "diagrams_lifted": r.diagrams_lifted,
    });
    if let Some(m) = &r.malcev_term {
        b.witnesses.push(term_witness("malcev term", th.show(m)));
        b.checks = malcev::malcev_equations(m)
            .iter()
            .map(|eq| check(th, eq, Status::Proved))
            .collect();
    }
    if let Some(chain) = &r.hm_chain {
        for t in chain {
            b.witnesses.push(term_witness("chain term", th.show(t)));
        }
        b.checks.extend(
            malcev::chain_equations(chain)
                .iter()
                .map(|eq| check(th, eq, Status::Proved)),
        );
    }
    b
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Renames set labels that are not valid variable names (apex labels such
/// as `(a,b)`) to fresh identifiers, so witness terms re-parse.
fn legend(d: &PullbackDiagram) -> BTreeMap<String, String> {
    let labels: Vec<&String> = d
        .f1
        .dom()
        .iter()
        .chain(d.f2.dom())
        .chain(d.f1.cod())
        .chain(d.apex())
        .collect();
    let mut taken: HashSet<Name> = labels.iter().filter(|l| is_identifier(l)).map(|l| name(l)).collect();
    let mut out = BTreeMap::new();
    for l in labels {
        if out.contains_key(l) {
            continue;
        }
        let v = if is_identifier(l) {
            l.clone()
        } else {
            let v = fresh_name("v", &taken);
            taken.insert(v.clone());
            v.to_string()
        };
        out.insert(l.clone(), v);
    }
    out
}

fn preserve_body(e: &Engine, d: &PullbackDiagram, carrier_bound: usize, witness_bound: usize) -> Body {
    let th = e.theory();
    let legend = legend(d);
    let rename = Substitution::from_pairs(
        legend
            .iter()
            .filter(|(l, v)| l != v)
            .map(|(l, v)| (name(l), Term::var(v))),
    );
    let show = |t: &Term| th.show(&t.substitute(&rename));
    let pres = check_weak_preservation(e, d, carrier_bound, witness_bound);
    let r = &pres.report;
    let mut b = Body::new(status_of(&pres.verdict), String::new());
    b.reason = reason_of(&pres.verdict);
    b.summary = match &pres.verdict {
        Verdict::Proved(()) => format!(
            "every compatible pair lifts (verified up to bound: carriers of size {carrier_bound}, witnesses of size {witness_bound})"
        ),
        Verdict::Unknown(u) => format!("not every compatible pair lifted: {u}"),
        Verdict::Refuted(never) => match *never {},
    };
    if let Some(Unknown::NoWitnessForPair { left, right, .. }) = &mut b.reason {
        // the pair names carrier terms; carriers use the leg labels
        let sig = th.signature();
        for side in [left, right] {
            if let Ok(t) = parse_term(sig, side) {
                *side = show(&t);
            }
        }
    }
    let (p1, p2) = (d.p1.as_substitution(), d.p2.as_substitution());
    for w in &r.witnesses {
        b.witnesses.push(term_witness(&format!("lift of ({}, {})", show(&w.u1), show(&w.u2)), show(&w.w)));
        b.checks.push(check(th, &Equation::new(w.w.substitute(&p1), w.u1.clone()).substitute(&rename), Status::Proved));
        b.checks.push(check(th, &Equation::new(w.w.substitute(&p2), w.u2.clone()).substitute(&rename), Status::Proved));
    }
    b.detail = json!({
        "carrier_bound": r.carrier_bound,
        "witness_bound": r.witness_bound,
        "carrier1": r.carrier1.len(),
        "carrier2": r.carrier2.len(),
        "pairs": r.witnesses.iter().map(|w| json!({
            "u1": show(&w.u1),
            "u2": show(&w.u2),
            "w": show(&w.w),
        })).collect::<Vec<_>>(),
        "undecided_pairs": r.undecided_pairs,
        "apex": d.apex(),
        "legend": legend.iter().filter(|(l, v)| l != v).collect::<BTreeMap<_, _>>(),
    });
    b
}
