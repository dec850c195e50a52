//! Residual reports shared by the verification sweeps.

use serde_json::{json, Value};

use crate::numerics::Scalar;

/// One residual that failed its zero test.
#[derive(Clone, Debug)]
pub struct ResidualFailure<S> {
    pub n: usize,
    pub k: usize,
    pub value: S,
}

/// Outcome of one verification sweep over a table or identity.
#[derive(Clone, Debug)]
pub struct ResidualReport<S> {
    pub check: &'static str,
    pub pass: bool,
    /// Magnitude-largest residual seen, passing or not.
    pub max_residual: Option<S>,
    /// Largest |residual| / scale observed; 0.0 for clean exact runs.
    pub max_relative: f64,
    pub failures: Vec<ResidualFailure<S>>,
}

impl<S: Scalar> ResidualReport<S> {
    pub fn new(check: &'static str) -> Self {
        Self {
            check,
            pass: true,
            max_residual: None,
            max_relative: 0.0,
            failures: Vec::new(),
        }
    }

    /// Record one residual with the scale it was judged against.
    pub fn record(&mut self, n: usize, k: usize, value: S, scale: f64, ok: bool) {
        let mag = value.magnitude();
        if scale.max(1.0).is_finite() {
            self.max_relative = self.max_relative.max(mag / scale.max(1.0));
        }
        let is_new_max = match &self.max_residual {
            Some(current) => value.abs_cmp(current) == std::cmp::Ordering::Greater,
            None => true,
        };
        if is_new_max {
            self.max_residual = Some(value.clone());
        }
        if !ok {
            self.pass = false;
            self.failures.push(ResidualFailure { n, k, value });
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "check": self.check,
            "pass": self.pass,
            "max_residual": self.max_residual.as_ref().map(|v| v.to_text()),
            "max_relative": self.max_relative,
            "failures": self
                .failures
                .iter()
                .map(|f| json!([f.n, f.k, f.value.to_text()]))
                .collect::<Vec<_>>(),
        })
    }
}
