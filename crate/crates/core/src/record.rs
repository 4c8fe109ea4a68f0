use std::collections::BTreeMap;

use serde::Serialize;

use crate::norms::Exponent;

/// A parameter attached to a [`CheckRecord`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Param {
    Num(f64),
    Text(String),
    Flag(bool),
}

impl From<f64> for Param {
    fn from(v: f64) -> Self {
        if v.is_finite() {
            Param::Num(v)
        } else {
            Param::Text(v.to_string())
        }
    }
}

impl From<Exponent> for Param {
    fn from(e: Exponent) -> Self {
        e.value().into()
    }
}

impl From<&str> for Param {
    fn from(s: &str) -> Self {
        Param::Text(s.to_owned())
    }
}

impl From<String> for Param {
    fn from(s: String) -> Self {
        Param::Text(s)
    }
}

impl From<bool> for Param {
    fn from(b: bool) -> Self {
        Param::Flag(b)
    }
}

/// One checked inequality `lhs <= rhs`.
///
/// `pass` holds iff `slack = rhs - lhs >= -tolerance`; the absolute tolerance
/// is stored alongside.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub params: BTreeMap<String, Param>,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckRecord {
    /// Tolerance `rel_tol * max(|lhs|, |rhs|)`.
    pub fn relative(name: impl Into<String>, lhs: f64, rhs: f64, rel_tol: f64) -> Self {
        let scale = lhs.abs().max(if rhs.is_finite() { rhs.abs() } else { 0.0 });
        Self::absolute(name, lhs, rhs, rel_tol * scale).with("rel_tol", rel_tol)
    }

    pub fn absolute(name: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let slack = rhs - lhs;
        CheckRecord {
            name: name.into(),
            params: BTreeMap::new(),
            lhs,
            rhs,
            slack,
            tolerance,
            pass: slack >= -tolerance,
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<Param>) -> Self {
        self.params.insert(key.to_owned(), value.into());
        self
    }

    /// `lhs / rhs`, 0 when both vanish.
    pub fn ratio(&self) -> f64 {
        if self.lhs == 0.0 {
            0.0
        } else {
            self.lhs / self.rhs
        }
    }
}
