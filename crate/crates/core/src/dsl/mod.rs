//! Script front end: parse, elaborate against the kernel, run commands and
//! report.
//!
//! ```text
//! algebra su2 { xi1:1 xi2:1 xi3:1 }
//! derivation Q on su2 degree 1 { xi1 -> -xi2*xi3; xi2 -> -xi3*xi1; xi3 -> -xi1*xi2 }
//! check nilpotent Q
//! ```

pub mod ast;
mod commands;
mod eval;
pub mod fmt;
pub mod lexer;
pub mod parser;
pub mod report;

use std::path::PathBuf;

pub use ast::{Script, Span};
pub use eval::{Env, Value};
pub use fmt::{format_expr, format_script};
pub use parser::{parse, parse_expr};
pub use report::{Record, Report, Status};

use crate::graded::{GradedAlgebra, Polynomial};

/// Exit codes of `gq`.
pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_SEMANTIC: i32 = 3;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: parse error: expected {}, found {found}", expected.join(" or "))]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub expected: Vec<String>,
    pub found: String,
}

impl ParseError {
    pub fn new(span: Span, expected: Vec<String>, found: String) -> Self {
        ParseError { line: span.line, col: span.col, expected, found }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum SemanticKind {
    UnknownName,
    DuplicateName,
    DegreeMismatch,
    AlgebraMismatch,
    TypeMismatch,
    InvalidArgument,
    Io,
    Kernel,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {kind:?}: {message}")]
pub struct SemanticError {
    pub line: usize,
    pub col: usize,
    pub kind: SemanticKind,
    pub message: String,
}

impl SemanticError {
    pub fn new(span: Span, kind: SemanticKind, message: impl Into<String>) -> Self {
        SemanticError { line: span.line, col: span.col, kind, message: message.into() }
    }

    pub fn kernel(span: Span, e: crate::Error) -> Self {
        use crate::Error as E;
        let kind = match &e {
            E::DegreeMismatch(_) | E::Inhomogeneous | E::NotHomogeneous(_) | E::EvenDegree(_) => {
                SemanticKind::DegreeMismatch
            }
            E::AlgebraMismatch => SemanticKind::AlgebraMismatch,
            E::UnknownGenerator(_) => SemanticKind::UnknownName,
            E::DuplicateName(_) => SemanticKind::DuplicateName,
            _ => SemanticKind::Kernel,
        };
        SemanticError::new(span, kind, e.to_string())
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum DslError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Semantic(#[from] SemanticError),
}

impl DslError {
    pub fn exit_code(&self) -> i32 {
        match self {
            DslError::Parse(_) => EXIT_PARSE,
            DslError::Semantic(_) => EXIT_SEMANTIC,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Options {
    /// Directory for relative `lie ... from "file"` imports.
    pub base_dir: Option<PathBuf>,
    pub timing: bool,
}

/// Elaborates a parsed script without running its commands.
pub fn elaborate(script: &Script, opts: &Options) -> Result<Env, SemanticError> {
    let mut env = Env::new(opts.base_dir.clone());
    for st in &script.stmts {
        env.statement(st)?;
    }
    Ok(env)
}

/// Elaborates everything first, then runs the commands in order.
pub fn run(script: &Script, opts: &Options) -> Result<Report, SemanticError> {
    let mut env = Env::new(opts.base_dir.clone());
    let mut jobs = Vec::new();
    for st in &script.stmts {
        if let Some(job) = env.statement(st)? {
            jobs.push(job);
        }
    }
    let records = jobs.into_iter().map(|j| j.execute(opts.timing)).collect();
    Ok(Report { records })
}

/// Parses and runs script text.
pub fn run_source(src: &str, opts: &Options) -> Result<Report, DslError> {
    let script = parse(src)?;
    Ok(run(&script, opts)?)
}

/// Reads a polynomial over `alg` from canonical (or any script) text.
pub fn parse_polynomial(alg: &GradedAlgebra, src: &str) -> Result<Polynomial, DslError> {
    let e = parse_expr(src)?;
    let env = Env::new(None);
    Ok(env.poly(&e, alg)?)
}
