//! Proximal anchored gradient descent (P-AGD) for composite monotone
//! inclusions `0 in F(z) + A(z)`, where `F` is monotone and `L`-Lipschitz
//! and `A` is maximally monotone.
//!
//! The iteration is
//!
//! ```text
//! z_{t+1} = J_{a_t A}((1 - b_t) z_t + b_t z_0 - a_t F(z_t)),
//! a_t = 1 / (L sqrt(t + gamma)),  b_t = gamma / (t + gamma),  gamma >= 2,
//! ```
//!
//! and its tangent residual `min_{c in A(z_T)} ||F(z_T) + c||` decays as
//! `O(L ||z_0 - z*|| / sqrt(T))`. Besides the method and its baselines (GD,
//! extragradient, unconstrained AGD) the crate ships residual evaluation
//! and an audit suite that checks each intermediate bound of that rate on
//! recorded runs.
//!
//! ```
//! use pagd_core::{instances, run, Method, RunOptions, StepSchedule};
//!
//! let problem = instances::builtin("rotation-unconstrained", 0).unwrap();
//! let sched = StepSchedule::new(2.0, problem.lipschitz()).unwrap();
//! let trace = run(&problem, &Method::ProximalAnchored(sched), 1000, &RunOptions::default()).unwrap();
//! assert!(trace.last().tangent_residual.unwrap() < 0.1);
//! ```

pub mod algorithms;
pub mod analysis;
pub mod error;
pub mod field;
pub mod instances;
pub mod linalg;
pub mod part;
pub mod point;
pub mod problem;
pub mod schedule;
pub mod trace;

pub use algorithms::{
    agd_step, eg_step, gd_step, p_agd_step, run, Method, MethodKind, RunOptions,
};
pub use error::{Error, Result};
pub use field::{probe_lipschitz, probe_monotonicity, FieldKind, MonotoneField};
pub use part::{ConeCertificate, MonotonePart};
pub use point::VectorPoint;
pub use problem::ProblemInstance;
pub use schedule::StepSchedule;
pub use trace::{RunTrace, TraceRecord};
