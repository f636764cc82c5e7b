//! Points of the Euclidean space the iteration runs in.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};

/// A point in `R^d` with finite coordinates.
///
/// Used for iterates, operator values, certificates and consecutive
/// differences alike.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct VectorPoint(Vec<f64>);

impl VectorPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidPoint("dimension must be at least 1".into()));
        }
        if let Some(i) = coords.iter().position(|x| !x.is_finite()) {
            return Err(Error::InvalidPoint(format!(
                "coordinate {i} is not finite ({})",
                coords[i]
            )));
        }
        Ok(Self(coords))
    }

    /// Wraps coordinates produced by arithmetic on valid points. The
    /// result may contain non-finite values when an iteration blows up;
    /// callers that care check [`VectorPoint::is_finite`].
    pub(crate) fn from_raw(coords: Vec<f64>) -> Self {
        debug_assert!(!coords.is_empty());
        Self(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![0.0; dim.max(1)])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm_squared(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.iter().map(|a| s * a).collect())
    }

    /// `self - s * other`.
    pub fn sub_scaled(&self, s: f64, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - s * b).collect())
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    pub fn ensure_dim(&self, dim: usize) -> Result<()> {
        check_dim(dim, self.dim())
    }
}

impl TryFrom<Vec<f64>> for VectorPoint {
    type Error = Error;

    fn try_from(coords: Vec<f64>) -> Result<Self> {
        Self::new(coords)
    }
}

impl From<VectorPoint> for Vec<f64> {
    fn from(p: VectorPoint) -> Self {
        p.0
    }
}

impl std::ops::Index<usize> for VectorPoint {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}
