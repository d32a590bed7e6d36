//! Line-oriented check reports.

use std::fmt;

use serde::Serialize;

/// One checked identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub id: String,
    pub labels: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// A named yes/no property that is reported but is not itself a pass/fail
/// criterion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Condition {
    pub id: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
    pub conditions: Vec<Condition>,
    pub info: Vec<String>,
}

/// Joins labels into one whitespace-free token; `-` when empty.
pub fn labels<S: AsRef<str>>(parts: &[S]) -> String {
    if parts.is_empty() {
        return "-".to_string();
    }
    let joined: Vec<&str> = parts.iter().map(AsRef::as_ref).collect();
    joined.join(",").replace(char::is_whitespace, "_")
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn check(&mut self, id: &str, labels: String, pass: bool) {
        self.checks.push(Check {
            id: id.to_string(),
            labels,
            pass,
            witness: None,
        });
    }

    /// Records a check whose witness is only kept on failure.
    pub fn check_with(&mut self, id: &str, labels: String, pass: bool, witness: impl FnOnce() -> String) {
        let witness = (!pass).then(witness);
        self.checks.push(Check {
            id: id.to_string(),
            labels,
            pass,
            witness,
        });
    }

    /// `Ok(())` passes, `Err(w)` fails with witness `w`.
    pub fn outcome(&mut self, id: &str, labels: String, r: Result<(), String>) {
        let pass = r.is_ok();
        self.checks.push(Check {
            id: id.to_string(),
            labels,
            pass,
            witness: r.err(),
        });
    }

    pub fn condition(&mut self, id: &str, holds: bool, detail: String) {
        self.conditions.push(Condition {
            id: id.to_string(),
            holds,
            detail,
        });
    }

    pub fn info(&mut self, line: String) {
        self.info.push(line);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
        self.conditions.extend(other.conditions);
        self.info.extend(other.info);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn passed(&self, id: &str) -> bool {
        self.checks.iter().filter(|c| c.id == id).all(|c| c.pass)
    }

    /// Number of checks with this id.
    pub fn count(&self, id: &str) -> usize {
        self.checks.iter().filter(|c| c.id == id).count()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "CHECK {} {} {}", c.id, c.labels, if c.pass { "PASS" } else { "FAIL" })?;
            if let Some(w) = &c.witness {
                writeln!(f, "  witness: {w}")?;
            }
        }
        for c in &self.conditions {
            writeln!(f, "CONDITION {} {} ({})", c.id, if c.holds { "HOLDS" } else { "FAILS" }, c.detail)?;
        }
        for line in &self.info {
            writeln!(f, "INFO {line}")?;
        }
        let failed = self.failures().count();
        writeln!(f, "SUMMARY {} checks, {} failed", self.checks.len(), failed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rendering() {
        let mut r = Report::new();
        r.check("a", labels(&["x", "y z"]), true);
        r.check_with("b", labels::<&str>(&[]), false, || "because".into());
        r.condition("c", false, "no".into());
        r.info("note".into());
        let s = r.to_string();
        assert_eq!(
            s,
            "CHECK a x,y_z PASS\nCHECK b - FAIL\n  witness: because\nCONDITION c FAILS (no)\nINFO note\nSUMMARY 2 checks, 1 failed\n"
        );
        assert!(!r.all_pass());
        assert!(r.passed("a"));
        assert!(!r.passed("b"));
    }
}
