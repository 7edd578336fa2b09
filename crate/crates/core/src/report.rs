//! Pass/fail reports shared by the verifiers and the command line.

use std::fmt;

use serde::Serialize;

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize, PartialEq)]
pub struct Report {
    pub title: String,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report {
            title: title.into(),
            ..Default::default()
        }
    }

    pub fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn note(&mut self, n: impl Into<String>) {
        self.notes.push(n.into());
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn failure_count(&self) -> usize {
        self.failures().count()
    }

    pub fn find(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn extend(&mut self, other: Report) {
        let prefix = other.title.clone();
        for c in other.checks {
            self.checks.push(Check {
                name: format!("{}: {}", prefix, c.name),
                ..c
            });
        }
        self.notes.extend(other.notes.into_iter().map(|n| format!("{}: {}", prefix, n)));
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "title": self.title,
            "passed": self.passed(),
            "checks": self.checks,
            "notes": self.notes,
        })
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "== {} ==", self.title)?;
        for c in &self.checks {
            let tag = if c.passed { "ok  " } else { "FAIL" };
            if c.detail.is_empty() {
                writeln!(f, "[{}] {}", tag, c.name)?;
            } else {
                writeln!(f, "[{}] {}: {}", tag, c.name, c.detail)?;
            }
        }
        for n in &self.notes {
            writeln!(f, "note: {}", n)?;
        }
        let bad = self.failure_count();
        write!(f, "{} checks, {} failed", self.checks.len(), bad)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extend_prefixes_names() {
        let mut a = Report::new("all");
        let mut b = Report::new("part");
        b.push("x", false, "bad");
        a.extend(b);
        assert!(!a.passed());
        assert_eq!(a.checks[0].name, "part: x");
    }
}
