//! Plain-text reports. Everything in a report is a function of the command,
//! its inputs and the seed; timings go to stderr instead.

use std::fmt::Write as _;

use sha2::{Digest, Sha256};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Finding {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub title: String,
    pub rows: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub command: String,
    pub field: String,
    /// Hex SHA-256 of the input files, or of the generator parameters.
    pub digest: String,
    pub seed: Option<u64>,
    pub tables: Vec<Table>,
    pub findings: Vec<Finding>,
}

pub fn digest(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

impl Report {
    pub fn new(command: impl Into<String>, field: impl Into<String>, digest: String, seed: Option<u64>) -> Self {
        Report {
            command: command.into(),
            field: field.into(),
            digest,
            seed,
            tables: Vec::new(),
            findings: Vec::new(),
        }
    }

    pub fn table(&mut self, title: impl Into<String>, rows: Vec<(String, String)>) {
        self.tables.push(Table {
            title: title.into(),
            rows,
        });
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.findings.push(Finding {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn failures(&self) -> usize {
        self.findings.iter().filter(|f| !f.passed).count()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        let _ = writeln!(out, "field: {}", self.field);
        let _ = writeln!(out, "inputs: sha256:{}", self.digest);
        if let Some(s) = self.seed {
            let _ = writeln!(out, "seed: {s}");
        }
        for t in &self.tables {
            let _ = writeln!(out, "\n[{}]", t.title);
            if t.rows.is_empty() {
                let _ = writeln!(out, "  (empty)");
            }
            let width = t.rows.iter().map(|r| r.0.chars().count()).max().unwrap_or(0);
            for (k, v) in &t.rows {
                let pad = width - k.chars().count();
                let _ = writeln!(out, "  {k}{}  {v}", " ".repeat(pad));
            }
        }
        if !self.findings.is_empty() {
            let _ = writeln!(out, "\n[checks]");
            for f in &self.findings {
                let tag = if f.passed { "PASS" } else { "FAIL" };
                if f.detail.is_empty() {
                    let _ = writeln!(out, "  {tag} {}", f.name);
                } else {
                    let _ = writeln!(out, "  {tag} {}: {}", f.name, f.detail);
                }
            }
            let n = self.findings.len();
            let _ = writeln!(out, "\nsummary: {} of {n} checks passed", n - self.failures());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_layout() {
        let mut r = Report::new("tot", "q", digest(&[b"x"]), None);
        r.table("total cohomology", vec![("0".into(), "1".into()), ("10".into(), "2".into())]);
        r.check("reassembly", true, "");
        r.check("ranks", false, "d1 at (0,0)");
        let text = r.render();
        assert!(text.contains("  0   1\n  10  2\n"));
        assert!(text.contains("FAIL ranks: d1 at (0,0)"));
        assert!(text.ends_with("summary: 1 of 2 checks passed\n"));
        assert!(!r.passed());
    }

    #[test]
    fn digest_separates_parts() {
        assert_ne!(digest(&[b"ab", b"c"]), digest(&[b"a", b"bc"]));
        assert_eq!(digest(&[b""]).len(), 64);
    }
}
