//! The `.cayley` text format: `n` on the first line, then `n` rows of `n`
//! whitespace-separated 0-based indices. Row `g`, column `h` holds `g·h`.

use std::path::Path;

use grpiso::group::{CayleyTable, GroupError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CayleyFileError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid table: {0}")]
    Validation(#[from] GroupError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CayleyFileError {
    /// The offending line for parse errors.
    pub fn line(&self) -> Option<usize> {
        match self {
            CayleyFileError::Parse { line, .. } => Some(*line),
            _ => None,
        }
    }
}

fn perr(line: usize, msg: impl Into<String>) -> CayleyFileError {
    CayleyFileError::Parse { line, msg: msg.into() }
}

pub fn parse_cayley_str(text: &str) -> Result<CayleyTable, CayleyFileError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, first) = lines.next().ok_or_else(|| perr(1, "empty input"))?;
    let n: usize = first.trim().parse().map_err(|_| perr(1, "expected the order n"))?;
    if n == 0 {
        return Err(perr(1, "order must be positive"));
    }
    let mut rows = Vec::with_capacity(n);
    for (ln, l) in lines.by_ref() {
        if rows.len() == n {
            if !l.trim().is_empty() {
                return Err(perr(ln, "trailing data after the table"));
            }
            continue;
        }
        let row: Vec<usize> = l
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| perr(ln, format!("bad entry {t:?}"))))
            .collect::<Result<_, _>>()?;
        if row.len() != n {
            return Err(perr(ln, format!("expected {n} entries, found {}", row.len())));
        }
        rows.push(row);
    }
    if rows.len() < n {
        return Err(perr(rows.len() + 2, format!("expected {n} rows, found {}", rows.len())));
    }
    Ok(CayleyTable::validate(&rows)?)
}

pub fn format_cayley(g: &CayleyTable) -> String {
    let n = g.order();
    let mut s = String::with_capacity(n * n * 4 + 8);
    s.push_str(&n.to_string());
    s.push('\n');
    for a in 0..n {
        for b in 0..n {
            if b > 0 {
                s.push(' ');
            }
            s.push_str(&g.mul(a, b).to_string());
        }
        s.push('\n');
    }
    s
}

pub fn parse_cayley(path: &Path) -> Result<CayleyTable, CayleyFileError> {
    parse_cayley_str(&std::fs::read_to_string(path)?)
}

pub fn write_cayley(g: &CayleyTable, path: &Path) -> Result<(), CayleyFileError> {
    Ok(std::fs::write(path, format_cayley(g))?)
}
