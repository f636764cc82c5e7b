//! Problem instances `0 in F(z) + A(z)` and their JSON form.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::field::MonotoneField;
use crate::linalg::Matrix;
use crate::part::{MonotonePart, PartDescriptor};
use crate::point::VectorPoint;

/// Largest tangent residual accepted at a declared solution.
pub const SOLUTION_TOL: f64 = 1e-9;

/// A composite monotone inclusion with its starting point.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemInstance {
    field: MonotoneField,
    part: MonotonePart,
    start: VectorPoint,
    known_solution: Option<VectorPoint>,
    label: String,
}

impl ProblemInstance {
    pub fn new(
        label: impl Into<String>,
        field: MonotoneField,
        part: MonotonePart,
        start: VectorPoint,
        known_solution: Option<VectorPoint>,
    ) -> Result<Self> {
        let dim = field.dim();
        check_dim(dim, part.dim())?;
        check_dim(dim, start.dim())?;
        if let Some(sol) = &known_solution {
            check_dim(dim, sol.dim())?;
            let residual = part
                .cone_distance(sol, &field.apply(sol))
                .map_err(|e| Error::InvalidParameter(format!("known solution rejected: {e}")))?;
            if residual > SOLUTION_TOL {
                return Err(Error::InvalidParameter(format!(
                    "known solution has tangent residual {residual:e} > {SOLUTION_TOL:e}"
                )));
            }
        }
        Ok(Self {
            field,
            part,
            start,
            known_solution,
            label: label.into(),
        })
    }

    pub fn field(&self) -> &MonotoneField {
        &self.field
    }

    pub fn part(&self) -> &MonotonePart {
        &self.part
    }

    pub fn start(&self) -> &VectorPoint {
        &self.start
    }

    pub fn known_solution(&self) -> Option<&VectorPoint> {
        self.known_solution.as_ref()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.field.dim()
    }

    pub fn lipschitz(&self) -> f64 {
        self.field.lipschitz()
    }

    /// Same problem started from a different point.
    pub fn with_start(&self, start: VectorPoint) -> Result<Self> {
        check_dim(self.dim(), start.dim())?;
        Ok(Self {
            start,
            ..self.clone()
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ProblemDocument =
            serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        Self::try_from(&doc)
    }
}

/// JSON description of a field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldDescriptor {
    pub kind: String,
    /// Row-major `dim * dim` entries (linear, custom-matrix).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<f64>>,
    /// Saddle blocks, row-major: `P` is `n*n`, `Q` is `n*m`, `R` is `m*m`.
    #[serde(default, rename = "P", skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<f64>>,
    #[serde(default, rename = "Q", skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<f64>>,
    #[serde(default, rename = "R", skip_serializing_if = "Option::is_none")]
    pub r: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_dim: Option<usize>,
    #[serde(default)]
    pub offset: Option<Vec<f64>>,
    #[serde(rename = "L")]
    pub lipschitz: f64,
}

/// JSON description of a problem instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDocument {
    pub label: String,
    pub dim: usize,
    pub field: FieldDescriptor,
    pub part: PartDescriptor,
    pub start: Vec<f64>,
    #[serde(default)]
    pub known_solution: Option<Vec<f64>>,
}

fn field_from_descriptor(d: &FieldDescriptor, dim: usize) -> Result<MonotoneField> {
    let offset = d.offset.clone().unwrap_or_else(|| vec![0.0; dim]);
    let need = |v: &Option<Vec<f64>>, name: &str| {
        v.clone()
            .ok_or_else(|| Error::Schema(format!("field kind {} requires \"{name}\"", d.kind)))
    };
    let field = match d.kind.as_str() {
        "rotation" => {
            if dim != 2 {
                return Err(Error::Schema("rotation field is two-dimensional".into()));
            }
            MonotoneField::rotation(d.lipschitz)?
        }
        "linear" => MonotoneField::linear(
            Matrix::from_row_major(dim, dim, need(&d.matrix, "matrix")?)?,
            offset,
            d.lipschitz,
        )?,
        "custom-matrix" => MonotoneField::custom_matrix(
            Matrix::from_row_major(dim, dim, need(&d.matrix, "matrix")?)?,
            offset,
            d.lipschitz,
        )?,
        "saddle-bilinear" => {
            let n = d
                .x_dim
                .ok_or_else(|| Error::Schema("saddle-bilinear requires \"x_dim\"".into()))?;
            if n == 0 || n >= dim {
                return Err(Error::Schema(format!(
                    "x_dim must lie in 1..{dim}, got {n}"
                )));
            }
            let m = dim - n;
            MonotoneField::saddle_bilinear(
                Matrix::from_row_major(n, n, need(&d.p, "P")?)?,
                Matrix::from_row_major(n, m, need(&d.q, "Q")?)?,
                Matrix::from_row_major(m, m, need(&d.r, "R")?)?,
                offset,
                d.lipschitz,
            )?
        }
        other => return Err(Error::Schema(format!("unknown field kind \"{other}\""))),
    };
    check_dim(dim, field.dim())?;
    Ok(field)
}

impl TryFrom<&ProblemDocument> for ProblemInstance {
    type Error = Error;

    fn try_from(doc: &ProblemDocument) -> Result<Self> {
        let field = field_from_descriptor(&doc.field, doc.dim)?;
        let part = MonotonePart::try_from(&doc.part)?;
        let start = VectorPoint::new(doc.start.clone())?;
        let known_solution = doc
            .known_solution
            .clone()
            .map(VectorPoint::new)
            .transpose()?;
        Self::new(doc.label.clone(), field, part, start, known_solution)
    }
}
