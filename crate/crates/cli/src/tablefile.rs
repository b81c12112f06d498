//! Plain-text operation tables.
//!
//! ```text
//! # comment lines start with '#'
//! labels: a b c
//! 3
//! 0 1 2
//! 1 2 0
//! 2 0 1
//! ```
//!
//! The `labels:` header is optional and only affects how elements are
//! displayed; the table itself always uses integers.

use std::fmt;
use std::path::Path;

use medial_core::{validate_table, Element, QuasigroupTable};
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableFile {
    pub table: QuasigroupTable,
    pub labels: Option<Vec<String>>,
}

impl TableFile {
    pub fn new(table: QuasigroupTable) -> Self {
        TableFile { table, labels: None }
    }

    /// Display name of `x`.
    pub fn label(&self, x: Element) -> String {
        match &self.labels {
            Some(l) => l[x].clone(),
            None => x.to_string(),
        }
    }
}

impl fmt::Display for TableFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(labels) = &self.labels {
            writeln!(f, "labels: {}", labels.join(" "))?;
        }
        write!(f, "{}", self.table)
    }
}

/// A table read from disk together with the SHA-256 of its bytes.
#[derive(Debug, Clone)]
pub struct LoadedTable {
    pub file: TableFile,
    pub path: String,
    pub sha256: String,
}

pub fn load(path: &Path) -> Result<LoadedTable, CliError> {
    let shown = path.display().to_string();
    let bytes = std::fs::read(path).map_err(|source| CliError::Io {
        path: shown.clone(),
        source,
    })?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| CliError::Parse {
        path: shown.clone(),
        line: 0,
        message: "file is not UTF-8".into(),
    })?;
    let file = parse(&text).map_err(|e| e.with_path(&shown))?;
    Ok(LoadedTable {
        file,
        path: shown,
        sha256: hex::encode(Sha256::digest(&bytes)),
    })
}

pub fn parse(text: &str) -> Result<TableFile, CliError> {
    let err = |line: usize, message: String| CliError::Parse {
        path: String::new(),
        line,
        message,
    };
    let mut labels = None;
    let mut order = None;
    let mut rows: Vec<Vec<Element>> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("labels:") {
            if labels.is_some() || !rows.is_empty() {
                return Err(err(line_no, "labels header must appear once, before the rows".into()));
            }
            labels = Some(rest.split_whitespace().map(String::from).collect::<Vec<_>>());
            continue;
        }
        let numbers = line
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| err(line_no, format!("expected a non-negative integer, found {t:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        match order {
            None => {
                if numbers.len() != 1 {
                    return Err(err(line_no, "first line must hold the order n".into()));
                }
                order = Some(numbers[0]);
            }
            Some(n) if rows.len() == n => return Err(err(line_no, format!("more than {n} rows"))),
            Some(_) => rows.push(numbers),
        }
    }
    let n = order.ok_or_else(|| err(0, "missing order line".into()))?;
    if rows.len() != n {
        return Err(err(0, format!("expected {n} rows, found {}", rows.len())));
    }
    if let Some(l) = &labels {
        if l.len() != n {
            return Err(err(
                0,
                format!("labels header names {} elements, table has {n}", l.len()),
            ));
        }
    }
    let table = validate_table(&rows)?;
    Ok(TableFile { table, labels })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_labels() {
        let text = "# Z3\nlabels: a b c\n3\n0 1 2\n1 2 0\n\n2 0 1\n";
        let t = parse(text).unwrap();
        assert_eq!(t.table, QuasigroupTable::cyclic(3));
        assert_eq!(t.label(2), "c");
        assert_eq!(parse(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(parse("2\n0 1\n"), Err(CliError::Parse { .. })));
        assert!(matches!(parse("2\n0 1\n1 x\n"), Err(CliError::Parse { line: 3, .. })));
        assert!(matches!(parse("2\n0 1\n0 1\n"), Err(CliError::Table(_))));
        assert!(matches!(parse("labels: a\n2\n0 1\n1 0\n"), Err(CliError::Parse { .. })));
    }
}
