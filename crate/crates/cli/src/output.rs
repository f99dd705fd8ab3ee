use serde::Serialize;
use serde_json::{json, Value};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Table,
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub kind: String,
    pub check: String,
    pub detail: String,
}

impl Failure {
    pub fn new(check: impl Into<String>, detail: impl Into<String>) -> Self {
        Failure {
            kind: "check-failed".into(),
            check: check.into(),
            detail: detail.into(),
        }
    }

    pub fn from_error(e: &CliError) -> Self {
        let check = match e {
            CliError::Core(symkl::Error::CheckFailed { check, .. })
            | CliError::Stale {
                source: symkl::Error::CheckFailed { check, .. },
                ..
            } => check.clone(),
            _ => e.kind().to_string(),
        };
        Failure {
            kind: e.kind().into(),
            check,
            detail: e.to_string(),
        }
    }
}

/// What a command produced: one table for humans and CSV, a JSON document,
/// and any failed checks.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub notes: Vec<String>,
    pub json: Value,
    pub failures: Vec<Failure>,
}

impl Report {
    pub fn new(columns: &[&str]) -> Self {
        Report {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            ..Default::default()
        }
    }

    pub fn row<I, S>(&mut self, cells: I)
    where
        I: IntoIterator<Item = S>,
        S: ToString,
    {
        self.rows.push(cells.into_iter().map(|c| c.to_string()).collect());
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Table => self.table(),
            Format::Csv => self.csv(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("json value");
                s.push('\n');
                s
            }
        }
    }

    fn table(&self) -> String {
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, &w)| format!("{c:<w$}"))
                .collect();
            padded.join("  ").trim_end().to_string()
        };
        let mut out = line(&self.columns);
        out.push('\n');
        out.push_str(&line(&widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>()));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&line(row));
            out.push('\n');
        }
        for note in &self.notes {
            out.push_str(note);
            out.push('\n');
        }
        out
    }

    fn csv(&self) -> String {
        let mut out = String::new();
        for row in std::iter::once(&self.columns).chain(&self.rows) {
            let cells: Vec<String> = row.iter().map(|c| csv_cell(c)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

fn csv_cell(c: &str) -> String {
    if c.contains([',', '"', '\n']) {
        format!("\"{}\"", c.replace('"', "\"\""))
    } else {
        c.to_string()
    }
}

/// The document written to stderr when a command fails.
pub fn failure_json(command: &str, failures: &[Failure]) -> String {
    json!({ "status": "failed", "command": command, "failures": failures }).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_all_formats() {
        let mut r = Report::new(&["p", "M"]);
        r.row(["5", "1 + 2T"]);
        r.row(["11", "a,b"]);
        r.json = json!({"n": 2});
        assert_eq!(r.render(Format::Table), "p   M\n--  ------\n5   1 + 2T\n11  a,b\n");
        assert_eq!(r.render(Format::Csv), "p,M\n5,1 + 2T\n11,\"a,b\"\n");
        assert_eq!(r.render(Format::Json), "{\n  \"n\": 2\n}\n");
    }
}
