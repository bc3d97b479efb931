//! Check reports: a flat list of named pass/fail lines with exact values,
//! renderable as text or JSON.

use serde_json::{json, Value as Json};

#[derive(Clone, Debug)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub details: String,
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub title: String,
    pub lines: Vec<CheckLine>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            lines: Vec::new(),
        }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, details: impl Into<String>) {
        self.lines.push(CheckLine {
            name: name.into(),
            passed,
            details: details.into(),
        });
    }

    pub fn merge(&mut self, other: Report) {
        self.lines.extend(other.lines);
    }

    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.passed)
    }

    pub fn failures(&self) -> Vec<&CheckLine> {
        self.lines.iter().filter(|l| !l.passed).collect()
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{}: {} ({}/{} checks)\n",
            self.title,
            if self.passed() { "PASS" } else { "FAIL" },
            self.lines.iter().filter(|l| l.passed).count(),
            self.lines.len()
        ));
        for l in &self.lines {
            out.push_str(&format!(
                "  [{}] {}: {}\n",
                if l.passed { "ok" } else { "FAIL" },
                l.name,
                l.details
            ));
        }
        out
    }

    pub fn to_json(&self) -> Json {
        json!({
            "title": self.title,
            "passed": self.passed(),
            "checks": self.lines.iter().map(|l| json!({
                "name": l.name,
                "passed": l.passed,
                "details": l.details,
            })).collect::<Vec<_>>(),
        })
    }
}
