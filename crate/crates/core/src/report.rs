//! Report types shared by the verification suite and the CLI, and their
//! JSON/CSV writers.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::{Error, Result};

/// Bumped whenever a field of the JSON reports changes meaning.
pub const SCHEMA_VERSION: u32 = 1;

/// One banded quantity: passes when `band_lo ≤ value ≤ band_hi`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub band_lo: f64,
    pub band_hi: f64,
    pub pass: bool,
}

impl Check {
    pub fn band(name: impl Into<String>, value: f64, lo: f64, hi: f64) -> Self {
        let pass = value >= lo && value <= hi;
        Self { name: name.into(), value, band_lo: lo, band_hi: hi, pass }
    }

    pub fn at_most(name: impl Into<String>, value: f64, hi: f64) -> Self {
        Self::band(name, value, f64::NEG_INFINITY, hi)
    }

    pub fn at_least(name: impl Into<String>, value: f64, lo: f64) -> Self {
        Self::band(name, value, lo, f64::INFINITY)
    }

    /// Boolean outcome recorded as `1`/`0` against the band `[1, 1]`.
    pub fn truth(name: impl Into<String>, ok: bool) -> Self {
        Self::band(name, if ok { 1.0 } else { 0.0 }, 1.0, 1.0)
    }
}

/// Outcome of one numbered criterion or supplementary group.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupResult {
    pub id: String,
    pub title: String,
    pub pass: bool,
    pub checks: Vec<Check>,
    /// Quantities reported without a band.
    pub diagnostics: BTreeMap<String, f64>,
    /// Library operations exercised.
    pub ops: Vec<String>,
    /// Set when a runner returned an error instead of a result.
    pub error: Option<String>,
}

impl GroupResult {
    pub fn new(id: impl Into<String>, title: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            title: title.into(),
            pass: true,
            checks: Vec::new(),
            diagnostics: BTreeMap::new(),
            ops: Vec::new(),
            error: None,
        }
    }

    pub fn push(&mut self, c: Check) {
        self.pass &= c.pass;
        self.checks.push(c);
    }

    pub fn diag(&mut self, name: impl Into<String>, v: f64) {
        self.diagnostics.insert(name.into(), v);
    }

    pub fn uses(&mut self, ops: &[&str]) {
        for op in ops {
            if !self.ops.iter().any(|o| o == op) {
                self.ops.push(op.to_string());
            }
        }
    }

    pub fn fail_with(&mut self, e: &Error) {
        self.pass = false;
        self.error = Some(e.to_string());
    }

    /// Number of failed checks.
    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.pass).count() + usize::from(self.error.is_some())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub suite: String,
    pub seed: u64,
    pub pass: bool,
    pub criteria: Vec<GroupResult>,
    pub supplementary: Vec<GroupResult>,
    /// Operation name to the groups exercising it.
    pub coverage: BTreeMap<String, Vec<String>>,
}

/// Serialize with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Numerical(format!("json: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Write `contents` to `path`, or to stdout when `path` is `None` or `-`.
pub fn write_output(path: Option<&Path>, contents: &str) -> Result<()> {
    match path {
        Some(p) if p != Path::new("-") => {
            std::fs::write(p, contents).map_err(|e| Error::Numerical(format!("writing {}: {e}", p.display())))
        }
        _ => {
            let mut out = std::io::stdout().lock();
            out.write_all(contents.as_bytes()).map_err(|e| Error::Numerical(format!("stdout: {e}")))
        }
    }
}

/// Minimal CSV writer: a header line followed by rows of already formatted
/// fields.  Fields never contain commas here, so no quoting is done.
pub fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for r in rows {
        s.push_str(&r.join(","));
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_bands() {
        assert!(Check::band("x", 1.0, 0.0, 1.0).pass);
        assert!(!Check::at_most("x", 1.5, 1.0).pass);
        assert!(!Check::at_least("x", f64::NAN, 0.0).pass);
        assert!(Check::truth("t", true).pass);
        let mut g = GroupResult::new("1", "t");
        g.push(Check::truth("a", true));
        g.push(Check::truth("b", false));
        assert!(!g.pass);
        assert_eq!(g.failures(), 1);
    }

    #[test]
    fn csv_layout() {
        let s = csv(&["a", "b"], &[vec!["1".into(), "2".into()]]);
        assert_eq!(s, "a,b\n1,2\n");
    }

    #[test]
    fn nonfinite_serializes() {
        let c = Check::at_most("x", 1.0, 2.0);
        let s = to_json(&c).unwrap();
        assert!(s.contains("null"));
    }
}
