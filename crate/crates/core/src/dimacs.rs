//! DIMACS CNF import and export.
//!
//! Accepted input: optional `c` comment lines, exactly one `p cnf <vars> <clauses>`
//! header before the first clause, then whitespace-separated signed integers with
//! every clause terminated by `0`. Clauses may span lines.

use std::fmt::Write;

use thiserror::Error;

use crate::sat::{CnfInstance, Lit};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct DimacsError {
    pub line: usize,
    pub kind: DimacsErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DimacsErrorKind {
    #[error("missing `p cnf` header")]
    MissingHeader,
    #[error("duplicate header")]
    DuplicateHeader,
    #[error("malformed header `{0}`")]
    MalformedHeader(String),
    #[error("invalid token `{0}`")]
    InvalidToken(String),
    #[error("literal {lit} out of range (header declares {num_vars} variables)")]
    LiteralOutOfRange { lit: i64, num_vars: u32 },
    #[error("clause is missing its terminating 0")]
    MissingTerminator,
    #[error("header declares {declared} clauses but {found} were found")]
    ClauseCount { declared: usize, found: usize },
}

/// Renders the stored clauses of `instance` (learned clauses excluded).
pub fn write_dimacs(instance: &CnfInstance) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "p cnf {} {}",
        instance.num_vars(),
        instance.num_clauses()
    )
    .unwrap();
    for clause in instance.clauses() {
        for lit in clause {
            write!(out, "{} ", lit.to_dimacs()).unwrap();
        }
        out.push_str("0\n");
    }
    out
}

pub fn read_dimacs(text: &str) -> Result<CnfInstance, DimacsError> {
    let mut instance: Option<CnfInstance> = None;
    let mut declared = 0usize;
    let mut found = 0usize;
    let mut clause: Vec<Lit> = Vec::new();
    let mut last_line = 0usize;
    let mut clause_line = 0usize;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        let err = |kind| DimacsError { line, kind };
        if trimmed.starts_with('p') {
            if instance.is_some() {
                return Err(err(DimacsErrorKind::DuplicateHeader));
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            let malformed = || err(DimacsErrorKind::MalformedHeader(trimmed.to_string()));
            if fields.len() != 4 || fields[0] != "p" || fields[1] != "cnf" {
                return Err(malformed());
            }
            let vars: u32 = fields[2].parse().map_err(|_| malformed())?;
            declared = fields[3].parse().map_err(|_| malformed())?;
            let mut inst = CnfInstance::new();
            for _ in 0..vars {
                inst.new_var();
            }
            instance = Some(inst);
            continue;
        }
        let inst = instance
            .as_mut()
            .ok_or_else(|| err(DimacsErrorKind::MissingHeader))?;
        for token in trimmed.split_whitespace() {
            let value: i64 = token
                .parse()
                .map_err(|_| err(DimacsErrorKind::InvalidToken(token.to_string())))?;
            if value == 0 {
                inst.add_clause(&clause).expect("range checked");
                clause.clear();
                found += 1;
                continue;
            }
            if value.unsigned_abs() > u64::from(inst.num_vars()) {
                return Err(err(DimacsErrorKind::LiteralOutOfRange {
                    lit: value,
                    num_vars: inst.num_vars(),
                }));
            }
            if clause.is_empty() {
                clause_line = line;
            }
            clause.push(Lit::from_dimacs(value).expect("nonzero and in range"));
        }
    }

    if !clause.is_empty() {
        return Err(DimacsError {
            line: clause_line,
            kind: DimacsErrorKind::MissingTerminator,
        });
    }
    let instance = instance.ok_or(DimacsError {
        line: last_line.max(1),
        kind: DimacsErrorKind::MissingHeader,
    })?;
    if found != declared {
        return Err(DimacsError {
            line: last_line,
            kind: DimacsErrorKind::ClauseCount { declared, found },
        });
    }
    Ok(instance)
}
