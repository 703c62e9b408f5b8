//! Structured outcomes of identity checks, shared by the CLI and the tests.

use serde::Serialize;

/// First coefficient where an identity failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub location: String,
    pub expected: String,
    pub computed: String,
}

/// Result of checking one identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub anchor: String,
    pub passed: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mismatch: Option<Mismatch>,
}

impl Check {
    pub fn pass(name: impl Into<String>, anchor: impl Into<String>, detail: impl Into<String>) -> Self {
        Check { name: name.into(), anchor: anchor.into(), passed: true, detail: detail.into(), mismatch: None }
    }

    pub fn fail(
        name: impl Into<String>,
        anchor: impl Into<String>,
        detail: impl Into<String>,
        mismatch: Option<Mismatch>,
    ) -> Self {
        Check { name: name.into(), anchor: anchor.into(), passed: false, detail: detail.into(), mismatch }
    }

    /// Builds a check from the first mismatch found, if any.
    pub fn from_mismatch(
        name: impl Into<String>,
        anchor: impl Into<String>,
        detail: impl Into<String>,
        mismatch: Option<Mismatch>,
    ) -> Self {
        match mismatch {
            None => Self::pass(name, anchor, detail),
            Some(m) => Self::fail(name, anchor, detail, Some(m)),
        }
    }
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}
