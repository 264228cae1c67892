//! Structured outcome of one identity or theorem check.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::series::{Monomial, Series, Window};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactRegion {
    pub q_max: u32,
    pub x_max: u32,
}

impl From<Window> for ExactRegion {
    fn from(w: Window) -> Self {
        ExactRegion { q_max: w.q_max, x_max: w.x_max }
    }
}

impl From<ExactRegion> for Window {
    fn from(r: ExactRegion) -> Self {
        Window::new(r.q_max, r.x_max)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub monomial: Monomial,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub name: String,
    pub params: BTreeMap<String, Value>,
    pub exact_region: ExactRegion,
    pub status: Status,
    pub first_counterexample: Option<Counterexample>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
}

impl VerificationReport {
    pub fn new(name: &str, region: impl Into<ExactRegion>) -> Self {
        VerificationReport {
            name: name.to_string(),
            params: BTreeMap::new(),
            exact_region: region.into(),
            status: Status::Ok,
            first_counterexample: None,
            detail: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.params.insert(key.to_string(), serde_json::to_value(value).expect("param serializes"));
        self
    }

    pub fn skipped(name: &str, reason: &str) -> Self {
        let mut r = VerificationReport::new(name, ExactRegion { q_max: 0, x_max: 0 });
        r.status = Status::Skipped;
        r.param("reason", reason)
    }

    /// Compares `lhs` and `rhs` coefficient-wise inside `region`.
    pub fn compare(mut self, lhs: &Series, rhs: &Series) -> Self {
        let region: Window = self.exact_region.into();
        if let Some((m, a, b)) = lhs.first_difference(rhs, region) {
            self = self.fail(m, &a, &b);
        }
        self
    }

    /// Marks the report failed at `monomial` unless it already failed.
    pub fn fail(mut self, monomial: Monomial, lhs: &BigInt, rhs: &BigInt) -> Self {
        if self.status != Status::Fail {
            self.status = Status::Fail;
            self.first_counterexample = Some(Counterexample {
                monomial,
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            });
        }
        self
    }

    pub fn renamed(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn is_ok(&self) -> bool {
        self.status == Status::Ok
    }

    pub fn is_fail(&self) -> bool {
        self.status == Status::Fail
    }

    /// JSON with lexicographically ordered keys.
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// Overall status: ok iff every non-skipped report is ok.
pub fn overall(reports: &[VerificationReport]) -> Status {
    if reports.iter().any(|r| r.status == Status::Fail) {
        Status::Fail
    } else {
        Status::Ok
    }
}
