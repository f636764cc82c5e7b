use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Step sizes `alpha_t = 1 / (L sqrt(t + gamma))` and anchor weights
/// `beta_t = gamma / (t + gamma)`, with `gamma >= 2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepSchedule {
    gamma: f64,
    #[serde(rename = "L")]
    lipschitz: f64,
}

impl StepSchedule {
    pub fn new(gamma: f64, lipschitz: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma >= 2.0) {
            return Err(Error::InvalidParameter(format!(
                "schedule requires gamma >= 2, got {gamma}"
            )));
        }
        if !(lipschitz.is_finite() && lipschitz > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "schedule requires L > 0, got {lipschitz}"
            )));
        }
        Ok(Self { gamma, lipschitz })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    /// `(alpha_t, beta_t)`.
    pub fn step(&self, t: u64) -> (f64, f64) {
        let shifted = t as f64 + self.gamma;
        (1.0 / (self.lipschitz * shifted.sqrt()), self.gamma / shifted)
    }

    pub fn alpha(&self, t: u64) -> f64 {
        self.step(t).0
    }

    pub fn beta(&self, t: u64) -> f64 {
        self.step(t).1
    }
}
