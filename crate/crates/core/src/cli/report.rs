//! Per-statement results of a script run, as text or canonical JSON.

use serde::Serialize;

use super::suites::SuiteReport;
use super::{Diagnostic, Pos};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Outcome {
    Value {
        #[serde(rename = "type")]
        kind: String,
        text: String,
        value: serde_json::Value,
    },
    Check {
        report: SuiteReport,
    },
    Error {
        error: Diagnostic,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StmtResult {
    /// 1-based statement number.
    pub statement: usize,
    pub pos: Pos,
    /// The statement in canonical form.
    pub source: String,
    #[serde(flatten)]
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckCounts {
    pub run: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub seed: u64,
    pub results: Vec<StmtResult>,
    pub checks: CheckCounts,
    pub errors: usize,
    /// 0 when every check passed and nothing failed, 1 on a failed check or
    /// runtime error, 2 when the script did not parse or type-check.
    pub exit_code: i32,
}

impl Report {
    pub fn new(seed: u64, results: Vec<StmtResult>) -> Report {
        let mut checks = CheckCounts::default();
        let mut errors = 0;
        for r in &results {
            match &r.outcome {
                Outcome::Check { report } => {
                    checks.run += 1;
                    if report.passed {
                        checks.passed += 1;
                    } else {
                        checks.failed += 1;
                    }
                }
                Outcome::Error { .. } => errors += 1,
                Outcome::Value { .. } => {}
            }
        }
        let exit_code = if errors + checks.failed > 0 { 1 } else { 0 };
        Report { seed, results, checks, errors, exit_code }
    }

    /// A report for a script rejected before execution.
    pub fn rejected(seed: u64, statement: usize, source: String, error: Diagnostic) -> Report {
        let pos = error.pos.unwrap_or(Pos { line: 1, col: 1 });
        let result = StmtResult { statement, pos, source, outcome: Outcome::Error { error }, wall_ms: None };
        Report { seed, results: vec![result], checks: CheckCounts::default(), errors: 1, exit_code: 2 }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            let line = match &r.outcome {
                Outcome::Value { text, .. } => format!("[{}] {}\n  = {text}", r.pos, r.source),
                Outcome::Check { report } => {
                    let mut s = format!("[{}] {}\n  {}", r.pos, r.source, report.summary());
                    if let Some(w) = &report.witness {
                        s.push_str(&format!("\n  witness: {w}"));
                    }
                    s
                }
                Outcome::Error { error } => {
                    if r.source.is_empty() {
                        format!("{error}")
                    } else {
                        format!("[{}] {}\n  {error}", r.pos, r.source)
                    }
                }
            };
            out.push_str(&line);
            if let Some(ms) = r.wall_ms {
                out.push_str(&format!("  ({ms:.3} ms)"));
            }
            out.push('\n');
        }
        out.push_str(&format!(
            "checks: {} run, {} passed, {} failed; errors: {}\n",
            self.checks.run, self.checks.passed, self.checks.failed, self.errors
        ));
        out
    }
}
