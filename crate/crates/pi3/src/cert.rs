//! Pass/fail certificates attached to computed claims.
//!
//! A certificate records what was checked and, on failure, a witness that a
//! human (or a test) can act on.  Certificates are plain data so they embed
//! directly in JSON reports.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub claim: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Certificate {
    pub fn pass(claim: impl Into<String>) -> Self {
        Certificate { claim: claim.into(), passed: true, witness: None }
    }

    pub fn fail(claim: impl Into<String>, witness: impl Into<String>) -> Self {
        Certificate { claim: claim.into(), passed: false, witness: Some(witness.into()) }
    }

    pub fn of(claim: impl Into<String>, ok: bool, witness_on_fail: impl Into<String>) -> Self {
        if ok {
            Self::pass(claim)
        } else {
            Self::fail(claim, witness_on_fail)
        }
    }
}

pub fn all_passed(certs: &[Certificate]) -> bool {
    certs.iter().all(|c| c.passed)
}
