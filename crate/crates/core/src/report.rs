use std::fmt;

use serde::Serialize;

/// One violated invariant, named by a short kind tag and the offending id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: &'static str,
    pub subject: String,
    pub detail: String,
}

impl Violation {
    pub fn new(kind: &'static str, subject: impl Into<String>, detail: impl Into<String>) -> Self {
        Violation {
            kind,
            subject: subject.into(),
            detail: detail.into(),
        }
    }

    /// Prefixes the subject, used when a nested report is folded into an outer one.
    pub fn within(mut self, scope: &str) -> Self {
        self.subject = if self.subject.is_empty() {
            scope.to_string()
        } else {
            format!("{scope}/{}", self.subject)
        };
        self
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.subject.is_empty() {
            write!(f, "{}: {}", self.kind, self.detail)
        } else {
            write!(f, "{} [{}]: {}", self.kind, self.subject, self.detail)
        }
    }
}

/// Outcome of a validation pass. Validation never aborts; it collects.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, v: Violation) {
        self.violations.push(v);
    }

    pub fn extend_scoped(&mut self, scope: &str, other: ValidationReport) {
        self.violations
            .extend(other.violations.into_iter().map(|v| v.within(scope)));
    }

    pub fn has_kind(&self, kind: &str) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}
