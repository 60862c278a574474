//! Verdict reports: the JSON document and the human summary printed by the
//! command-line tool.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::engine::{Budget, Countermodel, FiniteAlgebra, Proof, Unknown};
use crate::term::{Equation, Signature, Theory};

/// Overall outcome of a command, which also fixes the exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Proved,
    Refuted,
    EvidenceAgainst,
    Unknown,
    /// Commands that list things rather than decide something.
    Listed,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Proved | Status::Listed => 0,
            Status::Refuted | Status::EvidenceAgainst => 1,
            Status::Unknown => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Term {
        role: String,
        term: String,
    },
    Model {
        role: String,
        size: usize,
        /// Operation tables keyed by symbol name.
        tables: BTreeMap<String, OpTable>,
        assignment: BTreeMap<String, usize>,
    },
}

/// Values in row-major order: the entry for `(a1, ..., an)` sits at index
/// `a1*size^(n-1) + ... + an`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OpTable {
    pub arity: usize,
    pub values: Vec<usize>,
}

/// An equation a reader can feed back to `prove` with the expected outcome.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub equation: String,
    pub expect: Status,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub theory_hash: String,
    pub budgets: Budget,
    pub verdict: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<Unknown>,
    pub summary: String,
    pub detail: serde_json::Value,
    pub witnesses: Vec<Witness>,
    pub checks: Vec<Check>,
    pub timing_ms: u64,
}

pub fn theory_hash(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn term_witness(role: &str, term: String) -> Witness {
    Witness::Term {
        role: role.to_string(),
        term,
    }
}

fn tables(sig: &Signature, a: &FiniteAlgebra) -> BTreeMap<String, OpTable> {
    sig.symbols()
        .iter()
        .zip(a.tables())
        .map(|(s, t)| {
            let table = OpTable {
                arity: s.arity,
                values: t.clone(),
            };
            (s.name.to_string(), table)
        })
        .collect()
}

pub fn model_witness(role: &str, sig: &Signature, a: &FiniteAlgebra, assignment: &[(crate::term::Name, usize)]) -> Witness {
    Witness::Model {
        role: role.to_string(),
        size: a.size(),
        tables: tables(sig, a),
        assignment: assignment.iter().map(|(v, x)| (v.to_string(), *x)).collect(),
    }
}

pub fn countermodel_witness(role: &str, sig: &Signature, c: &Countermodel) -> Witness {
    model_witness(role, sig, &c.algebra, &c.assignment)
}

pub fn check(th: &Theory, eq: &Equation, expect: Status) -> Check {
    Check {
        equation: th.show_eq(eq),
        expect,
    }
}

/// A derivation as JSON: each term with the step that produced it.
pub fn trace_json(th: &Theory, proof: &Proof) -> serde_json::Value {
    let mut rows = vec![serde_json::json!({ "term": th.show(proof.first()) })];
    for (step, t) in proof.steps.iter().zip(proof.terms.iter().skip(1)) {
        rows.push(serde_json::json!({
            "term": th.show(t),
            "axiom": step.axiom,
            "reversed": step.reversed,
            "position": step.position,
        }));
    }
    serde_json::Value::Array(rows)
}

fn render_table(out: &mut String, name: &str, size: usize, table: &OpTable) {
    for (i, v) in table.values.iter().enumerate() {
        let mut args = vec![0; table.arity];
        let mut k = i;
        for a in args.iter_mut().rev() {
            *a = k % size;
            k /= size;
        }
        let args: Vec<String> = args.iter().map(|a| a.to_string()).collect();
        let _ = writeln!(out, "    {name}({}) = {v}", args.join(","));
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Plain-text rendering for terminals.
    pub fn human(&self) -> String {
        let mut out = String::new();
        let verdict = serde_json::to_value(self.verdict).expect("status serializes");
        let _ = writeln!(out, "{}: {}", self.command, verdict.as_str().unwrap_or("?"));
        let _ = writeln!(out, "{}", self.summary);
        if let Some(r) = &self.reason {
            let _ = writeln!(out, "reason: {r}");
        }
        for w in &self.witnesses {
            match w {
                Witness::Term { role, term } => {
                    let _ = writeln!(out, "  {role}: {term}");
                }
                Witness::Model {
                    role,
                    size,
                    tables,
                    assignment,
                } => {
                    let _ = writeln!(out, "  {role}: algebra on {{0..{}}}", size - 1);
                    for (name, t) in tables {
                        render_table(&mut out, name, *size, t);
                    }
                    if !assignment.is_empty() {
                        let a: Vec<String> = assignment.iter().map(|(v, x)| format!("{v}={x}")).collect();
                        let _ = writeln!(out, "    at {}", a.join(", "));
                    }
                }
            }
        }
        if !self.checks.is_empty() {
            let _ = writeln!(out, "checks:");
            for c in &self.checks {
                let expect = serde_json::to_value(c.expect).expect("status serializes");
                let _ = writeln!(out, "  [{}] {}", expect.as_str().unwrap_or("?"), c.equation);
            }
        }
        let b = &self.budgets;
        let _ = writeln!(
            out,
            "budgets: term size {}, steps {}, model size {}",
            b.max_term_size, b.max_steps, b.max_model_size
        );
        out
    }
}
