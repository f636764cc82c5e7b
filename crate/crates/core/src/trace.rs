//! Per-iteration run records and their CSV / JSON serialization.
//!
//! CSV columns, in order:
//!
//! | column          | meaning                                                    |
//! |-----------------|------------------------------------------------------------|
//! | `t`             | iteration index, `0..=T`                                   |
//! | `z0 .. z{d-1}`  | coordinates of `z_t`                                       |
//! | `d_norm`        | `||z_{t+1} - z_t||`; empty on the last row                  |
//! | `cert_residual` | `||F(z_t) + c_t||`; empty at `t = 0`                        |
//! | `nat_residual`  | `||z_t - J_A(z_t - F(z_t))||`                               |
//! | `tan_residual`  | `min_{c in A(z_t)} ||F(z_t) + c||`; empty off the domain    |
//! | `anchor_dist`   | `||z_t - z_0||`                                             |
//! | `bound_thm`     | `L (2E + gamma D) / sqrt(t - 1 + gamma)` for `t >= 1`       |
//! | `bound_d_decay` | `E / (t + gamma)`                                           |
//!
//! The two bound columns are filled only when theorem constants are
//! supplied (a schedule-based run on a problem with a known solution).

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::algorithms::MethodKind;
use crate::analysis::TheoremConstants;
use crate::point::VectorPoint;

/// Diagnostics recorded at iterate `z_t`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceRecord {
    pub t: usize,
    pub z: VectorPoint,
    /// `||z_{t+1} - z_t||`, known once the next iterate exists.
    pub d_norm: Option<f64>,
    /// `c_t in A(z_t)`, defined for `t >= 1`.
    pub c: Option<VectorPoint>,
    pub certificate_residual: Option<f64>,
    pub natural_residual: f64,
    pub tangent_residual: Option<f64>,
    pub anchor_distance: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StepRule {
    Schedule {
        gamma: f64,
        #[serde(rename = "L")]
        lipschitz: f64,
    },
    Constant {
        step: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceMetadata {
    pub method: MethodKind,
    pub step_rule: StepRule,
    pub label: String,
    pub dim: usize,
    /// Requested horizon `T`.
    pub horizon: usize,
    /// Iterations actually performed.
    pub iterations: usize,
    pub diverged: bool,
    pub stopped_early: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunTrace {
    pub metadata: TraceMetadata,
    pub records: Vec<TraceRecord>,
}

impl RunTrace {
    pub fn gamma(&self) -> Option<f64> {
        match self.metadata.step_rule {
            StepRule::Schedule { gamma, .. } => Some(gamma),
            StepRule::Constant { .. } => None,
        }
    }

    pub fn last(&self) -> &TraceRecord {
        self.records.last().expect("traces hold at least the start point")
    }

    pub fn start(&self) -> &VectorPoint {
        &self.records[0].z
    }

    /// Column names of [`RunTrace::write_csv`].
    pub fn csv_header(dim: usize) -> Vec<String> {
        let mut h = vec!["t".to_string()];
        h.extend((0..dim).map(|i| format!("z{i}")));
        h.extend(
            [
                "d_norm",
                "cert_residual",
                "nat_residual",
                "tan_residual",
                "anchor_dist",
                "bound_thm",
                "bound_d_decay",
            ]
            .map(String::from),
        );
        h
    }

    /// One CSV row per record, in the order of [`RunTrace::csv_header`].
    pub fn csv_rows<'a>(
        &'a self,
        constants: Option<&'a TheoremConstants>,
    ) -> impl Iterator<Item = Vec<String>> + 'a {
        self.records.iter().map(move |r| {
            let mut row = Vec::with_capacity(self.metadata.dim + 8);
            row.push(r.t.to_string());
            row.extend(r.z.as_slice().iter().map(|x| fmt_num(*x)));
            row.push(fmt_opt(r.d_norm));
            row.push(fmt_opt(r.certificate_residual));
            row.push(fmt_num(r.natural_residual));
            row.push(fmt_opt(r.tangent_residual));
            row.push(fmt_num(r.anchor_distance));
            row.push(fmt_opt(constants.and_then(|k| k.residual_bound(r.t))));
            row.push(fmt_opt(constants.map(|k| k.d_decay_bound(r.t))));
            row
        })
    }

    pub fn write_csv<W: Write>(
        &self,
        out: W,
        constants: Option<&TheoremConstants>,
    ) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(Self::csv_header(self.metadata.dim))?;
        for row in self.csv_rows(constants) {
            w.write_record(&row)?;
        }
        w.flush()
    }

    /// Metadata sidecar for a CSV trace.
    pub fn metadata_json(&self) -> serde_json::Value {
        serde_json::to_value(&self.metadata).expect("metadata serializes")
    }
}

fn fmt_num(x: f64) -> String {
    format!("{x:e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}
