//! The `formacalc` expression language: lexer, parser, canonical printer,
//! static kinds, evaluation, invariant suites and reports.

pub mod ast;
pub mod eval;
pub mod lexer;
pub mod parser;
pub mod printer;
pub mod report;
pub mod suites;
pub mod types;
pub mod value;

use std::fmt;

use serde::Serialize;

use crate::{Error, ErrorCode};

pub use eval::{run, run_source, Session};
pub use parser::{parse, parse_expr};
pub use printer::{print_expr, print_script};
pub use report::Report;

/// A 1-based source position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// An error with its stable code and, when known, its source position.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Diagnostic {
    #[serde(serialize_with = "code_text")]
    pub code: ErrorCode,
    pub message: String,
    pub pos: Option<Pos>,
}

fn code_text<S: serde::Serializer>(c: &ErrorCode, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(c.as_str())
}

impl Diagnostic {
    pub fn new(code: ErrorCode, message: impl Into<String>, pos: Option<Pos>) -> Self {
        Diagnostic { code, message: message.into(), pos }
    }

    pub fn at(err: Error, pos: Pos) -> Self {
        Diagnostic::new(err.code(), err.to_string(), Some(pos))
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pos {
            Some(p) => write!(f, "error[{}] at {p}: {}", self.code, self.message),
            None => write!(f, "error[{}]: {}", self.code, self.message),
        }
    }
}

impl std::error::Error for Diagnostic {}

/// Limits shared by script runs and check suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Config {
    pub seed: u64,
    /// Truncation order for spaces declared without one.
    pub order: u32,
    /// Degree bound for generated polynomials; `None` keeps each suite's
    /// default.
    pub max_degree: Option<u32>,
    /// Record wall time per statement.
    pub timing: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config { seed: 0, order: 3, max_degree: None, timing: false }
    }
}
