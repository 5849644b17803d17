//! Structured outcome of a single numerical or exact check.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// A complex number in plain `{re, im}` form for serialization.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexValue {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<f64> for ComplexValue {
    fn from(x: f64) -> Self {
        Self { re: x, im: 0.0 }
    }
}

impl From<ComplexValue> for Complex64 {
    fn from(v: ComplexValue) -> Self {
        Complex64::new(v.re, v.im)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub const fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel }
    }

    pub const fn abs(abs: f64) -> Self {
        Self { abs, rel: 0.0 }
    }

    /// Relative `1e-10` with an absolute floor of `1e-12`.
    pub const DEFAULT: Tolerance = Tolerance::new(1e-12, 1e-10);
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// One check: what was computed, what it was compared to, and whether the
/// difference is within tolerance.
///
/// `passed` always equals `abs_err <= tolerance.abs || rel_err <= tolerance.rel`;
/// `rel_err` is absent when the reference is exactly zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check_id: String,
    /// Plain-language statement of the identity being checked.
    pub identity: String,
    pub inputs: Value,
    pub computed: ComplexValue,
    pub reference: ComplexValue,
    pub abs_err: f64,
    pub rel_err: Option<f64>,
    pub tolerance: Tolerance,
    pub passed: bool,
    pub runtime_ms: f64,
    /// Secondary diagnostics (alternative readings, residual sequences).
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub details: Value,
}

impl VerificationReport {
    pub fn compare(
        check_id: impl Into<String>,
        identity: impl Into<String>,
        inputs: Value,
        computed: Complex64,
        reference: Complex64,
        tolerance: Tolerance,
    ) -> Self {
        let abs_err = (computed - reference).norm();
        Self::with_error(check_id, identity, inputs, computed, reference, abs_err, tolerance)
    }

    /// Builds a report from an error measure computed by the caller
    /// (e.g. a bound violation or the worst residual over a sweep).
    pub fn with_error(
        check_id: impl Into<String>,
        identity: impl Into<String>,
        inputs: Value,
        computed: Complex64,
        reference: Complex64,
        abs_err: f64,
        tolerance: Tolerance,
    ) -> Self {
        let scale = reference.norm();
        let rel_err = (scale > 0.0).then(|| abs_err / scale);
        let passed = abs_err <= tolerance.abs || rel_err.is_some_and(|r| r <= tolerance.rel);
        Self {
            check_id: check_id.into(),
            identity: identity.into(),
            inputs,
            computed: computed.into(),
            reference: reference.into(),
            abs_err,
            rel_err,
            tolerance,
            passed,
            runtime_ms: 0.0,
            details: Value::Null,
        }
    }

    /// Forces a verdict that is not a plain distance comparison (monotonicity
    /// of a residual sequence, an exact identity). The error fields are kept
    /// for information.
    pub fn with_verdict(mut self, passed: bool) -> Self {
        self.passed = passed;
        self
    }

    pub fn with_details(mut self, details: Value) -> Self {
        self.details = details;
        self
    }

    pub fn with_runtime_ms(mut self, ms: f64) -> Self {
        self.runtime_ms = ms;
        self
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn from_json_line(line: &str) -> serde_json::Result<Self> {
        serde_json::from_str(line)
    }
}

/// Runs `f` and stamps the wall-clock runtime onto its report.
pub fn timed(f: impl FnOnce() -> VerificationReport) -> VerificationReport {
    let start = std::time::Instant::now();
    let report = f();
    let ms = start.elapsed().as_secs_f64() * 1e3;
    report.with_runtime_ms(ms)
}
