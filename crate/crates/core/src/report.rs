//! Structured verdicts shared by the command-line front end.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::lattice::{Elem, FiniteLattice, LatticeFile};
use crate::term::Assignment;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    Info,
}

/// Evidence attached to a check, always expressed with labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Assignment {
        values: Vec<(String, String)>,
    },
    Triple {
        x: String,
        y: String,
        z: String,
        direction: String,
    },
    Element {
        element: String,
    },
    Pair {
        x: String,
        y: String,
    },
    Partition {
        blocks: Vec<Vec<String>>,
    },
    Partitions {
        first: Vec<Vec<String>>,
        second: Vec<Vec<String>>,
    },
    Subset {
        elements: Vec<String>,
    },
}

impl Witness {
    pub fn assignment(l: &FiniteLattice, a: &Assignment) -> Self {
        Witness::Assignment {
            values: a
                .iter()
                .map(|(k, v)| (k.to_owned(), l.label(v).to_owned()))
                .collect(),
        }
    }

    pub fn element(l: &FiniteLattice, x: Elem) -> Self {
        Witness::Element {
            element: l.label(x).to_owned(),
        }
    }

    pub fn pair(l: &FiniteLattice, x: Elem, y: Elem) -> Self {
        Witness::Pair {
            x: l.label(x).to_owned(),
            y: l.label(y).to_owned(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl Check {
    pub fn holds(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            verdict: Verdict::Holds,
            detail: detail.into(),
            witness: None,
        }
    }

    /// A failure always carries its witness.
    pub fn fails(name: impl Into<String>, detail: impl Into<String>, witness: Witness) -> Self {
        Check {
            name: name.into(),
            verdict: Verdict::Fails,
            detail: detail.into(),
            witness: Some(witness),
        }
    }

    pub fn info(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            verdict: Verdict::Info,
            detail: detail.into(),
            witness: None,
        }
    }

    pub fn with_witness(mut self, w: Witness) -> Self {
        self.witness = Some(w);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub checks: Vec<Check>,
    /// Lattice produced by a generator command.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<LatticeFile>,
    pub exit_code: i32,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            checks: Vec::new(),
            lattice: None,
            exit_code: 0,
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    /// Sets the exit code from the verdicts: 1 if anything failed.
    pub fn finish(mut self) -> Self {
        self.exit_code = if self.checks.iter().any(|c| c.verdict == Verdict::Fails) {
            1
        } else {
            0
        };
        self
    }

    pub fn render_text(&self) -> String {
        if let Some(lattice) = &self.lattice {
            return serde_json::to_string_pretty(lattice).expect("lattice file serializes") + "\n";
        }
        let mut out = String::new();
        for c in &self.checks {
            let _ = match (c.verdict, c.detail.is_empty()) {
                (Verdict::Info, true) => writeln!(out, "{}", c.name),
                (Verdict::Info, false) => writeln!(out, "{}: {}", c.name, c.detail),
                (Verdict::Holds, true) => writeln!(out, "{}: holds", c.name),
                (Verdict::Holds, false) => writeln!(out, "{}: holds ({})", c.name, c.detail),
                (Verdict::Fails, _) => writeln!(out, "{}: fails: {}", c.name, c.detail),
            };
        }
        out
    }

    pub fn render_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_code_follows_verdicts() {
        let mut r = Report::new("check");
        r.push(Check::holds("adjoint", "125 triples"));
        assert_eq!(r.clone().finish().exit_code, 0);
        r.push(Check::fails(
            "variety",
            "x",
            Witness::Element {
                element: "a".into(),
            },
        ));
        assert_eq!(r.finish().exit_code, 1);
    }

    #[test]
    fn text_lines() {
        let mut r = Report::new("check");
        r.push(Check::holds("adjoint", "125 triples"));
        r.push(Check::fails(
            "variety",
            "identity (e) fails at x=c, y=a",
            Witness::Assignment {
                values: vec![("x".into(), "c".into()), ("y".into(), "a".into())],
            },
        ));
        assert_eq!(
            r.render_text(),
            "adjoint: holds (125 triples)\nvariety: fails: identity (e) fails at x=c, y=a\n"
        );
    }
}
