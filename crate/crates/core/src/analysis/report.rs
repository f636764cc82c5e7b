use serde::Serialize;
use serde_json::{json, Value};

/// Outcome of one audit check.
///
/// Serializes as `{check, pass, max_violation, argmax_t, details}` plus an
/// `applicable` flag; a check that cannot run (for example, no known
/// solution) is reported as not applicable rather than failed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditReport {
    pub check: String,
    pub applicable: bool,
    pub pass: bool,
    /// Largest amount by which the checked quantity exceeded its allowance;
    /// zero when every sample is within bounds.
    pub max_violation: f64,
    /// Iteration (or sample index) with the largest ratio to the bound.
    pub argmax_t: Option<usize>,
    pub details: Value,
}

impl AuditReport {
    pub fn not_applicable(check: &str, reason: impl Into<String>) -> Self {
        Self {
            check: check.into(),
            applicable: false,
            pass: true,
            max_violation: 0.0,
            argmax_t: None,
            details: json!({ "reason": reason.into() }),
        }
    }

    /// Failed only when applicable and not passing.
    pub fn failed(&self) -> bool {
        self.applicable && !self.pass
    }

    pub fn max_ratio(&self) -> Option<f64> {
        self.details.get("max_ratio").and_then(Value::as_f64)
    }
}

/// Folds samples `(t, value, bound)` of an inequality `value <= bound` into
/// a report, allowing `bound * (1 + rel) + abs`.
pub(crate) struct BoundTally {
    rel: f64,
    abs: f64,
    max_violation: f64,
    max_ratio: f64,
    argmax_t: Option<usize>,
    samples: usize,
    pass: bool,
}

impl BoundTally {
    pub fn new(rel: f64, abs: f64) -> Self {
        Self {
            rel,
            abs,
            max_violation: 0.0,
            max_ratio: f64::NEG_INFINITY,
            argmax_t: None,
            samples: 0,
            pass: true,
        }
    }

    pub fn push(&mut self, t: usize, value: f64, bound: f64) {
        self.samples += 1;
        let allowed = bound * (1.0 + self.rel) + self.abs;
        let excess = value - allowed;
        if excess > 0.0 || excess.is_nan() {
            self.pass = false;
            self.max_violation = self.max_violation.max(if excess.is_nan() { f64::INFINITY } else { excess });
        }
        let ratio = if bound > 0.0 {
            value / bound
        } else if value <= 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        if ratio > self.max_ratio || self.argmax_t.is_none() {
            self.max_ratio = ratio;
            self.argmax_t = Some(t);
        }
    }

    pub fn finish(self, check: &str, mut details: Value) -> AuditReport {
        if let Value::Object(map) = &mut details {
            map.insert("samples".into(), json!(self.samples));
            map.insert(
                "max_ratio".into(),
                json!(if self.samples == 0 { 0.0 } else { self.max_ratio }),
            );
        }
        AuditReport {
            check: check.into(),
            applicable: true,
            pass: self.pass,
            max_violation: self.max_violation,
            argmax_t: self.argmax_t,
            details,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tally_tracks_worst_ratio_and_violation() {
        let mut t = BoundTally::new(1e-9, 0.0);
        t.push(0, 0.5, 1.0);
        t.push(1, 2.0, 1.0);
        t.push(2, 0.9, 1.0);
        let r = t.finish("demo", json!({}));
        assert!(!r.pass);
        assert_eq!(r.argmax_t, Some(1));
        assert!((r.max_violation - 1.0).abs() < 1e-8);
        assert_eq!(r.max_ratio(), Some(2.0));
    }

    #[test]
    fn nan_counts_as_violation() {
        let mut t = BoundTally::new(0.0, 0.0);
        t.push(0, f64::NAN, 1.0);
        assert!(!t.finish("nan", json!({})).pass);
    }

    #[test]
    fn report_json_shape() {
        let r = AuditReport::not_applicable("bounded_iterates", "no known solution");
        let v = serde_json::to_value(&r).unwrap();
        for key in ["check", "pass", "max_violation", "argmax_t", "details"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert!(!r.failed());
    }
}
