use std::fmt;

use crate::error::join;

/// A violated axiom together with the first tuple that breaks it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub axiom: String,
    pub witness: Vec<usize>,
}

/// Outcome of an exhaustive axiom check.
///
/// Only the first witness of each axiom is kept. Rendering follows the
/// `KEY: value` line grammar used by the command-line reports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub subject: String,
    pub violations: Vec<Violation>,
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn new(subject: impl Into<String>) -> Self {
        Self {
            subject: subject.into(),
            violations: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    /// Records a failure unless the axiom already has a witness.
    pub fn fail(&mut self, axiom: &str, witness: &[usize]) {
        if !self.violates(axiom) {
            self.violations.push(Violation {
                axiom: axiom.to_string(),
                witness: witness.to_vec(),
            });
        }
    }

    /// Records a failure when `ok` is false. Returns `ok`.
    pub fn check(&mut self, ok: bool, axiom: &str, witness: &[usize]) -> bool {
        if !ok {
            self.fail(axiom, witness);
        }
        ok
    }

    pub fn violates(&self, axiom: &str) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }

    pub fn violation(&self, axiom: &str) -> Option<&Violation> {
        self.violations.iter().find(|v| v.axiom == axiom)
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Folds another report in, prefixing its axiom names.
    pub fn absorb(&mut self, prefix: &str, other: ValidationReport) {
        for v in other.violations {
            self.fail(&format!("{prefix}.{}", v.axiom), &v.witness);
        }
        self.notes.extend(other.notes);
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.is_valid() { "valid" } else { "invalid" };
        writeln!(f, "{}: {}", self.subject, verdict)?;
        for v in &self.violations {
            writeln!(f, "VIOLATION: {} at ({})", v.axiom, join(&v.witness))?;
        }
        for n in &self.notes {
            writeln!(f, "NOTE: {n}")?;
        }
        Ok(())
    }
}
