//! Experiment configuration file.
//!
//! ```json
//! {
//!   "problem": "box-linear-50",
//!   "methods": [{"name": "p-agd"}, {"name": "gd", "step": 0.5}],
//!   "T": 100000,
//!   "gamma": 2.0,
//!   "seed": 0,
//!   "output": {"trace_csv": "trace.csv", "report_json": "report.json", "plot_svg": "plot.svg"}
//! }
//! ```
//!
//! `problem` is either a builtin name or an inline problem document.

use std::fs;
use std::path::{Path, PathBuf};

use pagd_core::problem::ProblemDocument;
use pagd_core::{instances, Method, MethodKind, ProblemInstance, StepSchedule};
use serde::Deserialize;

use crate::CliError;

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum ProblemSpec {
    Builtin(String),
    Inline(Box<ProblemDocument>),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodSpec {
    pub name: String,
    /// Constant step for `gd` and `eg`; defaults to `1 / (2L)`.
    #[serde(default)]
    pub step: Option<f64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default = "default_trace_csv")]
    pub trace_csv: PathBuf,
    #[serde(default = "default_report_json")]
    pub report_json: PathBuf,
    #[serde(default)]
    pub plot_svg: Option<PathBuf>,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self {
            trace_csv: default_trace_csv(),
            report_json: default_report_json(),
            plot_svg: None,
        }
    }
}

fn default_trace_csv() -> PathBuf {
    "trace.csv".into()
}

fn default_report_json() -> PathBuf {
    "report.json".into()
}

/// Deliberate trace corruption, used to check that audits catch it.
#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaultInjection {
    /// Multiplies every recorded `||d_t||` before auditing.
    pub d_norm_scale: f64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: ProblemSpec,
    pub methods: Vec<MethodSpec>,
    #[serde(rename = "T")]
    pub horizon: usize,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default)]
    pub fault_injection: Option<FaultInjection>,
}

fn default_gamma() -> f64 {
    2.0
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let config: Self = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("invalid config {}: {e}", path.display())))?;
        Ok(config)
    }

    /// Applies command-line overrides. Relative output paths are placed
    /// under `out_dir` when one is given.
    pub fn apply_overrides(&mut self, seed: Option<u64>, out_dir: Option<&Path>) {
        if let Some(seed) = seed {
            self.seed = seed;
        }
        if let Some(dir) = out_dir {
            let place = |p: &mut PathBuf| {
                if p.is_relative() {
                    *p = dir.join(&*p);
                }
            };
            place(&mut self.output.trace_csv);
            place(&mut self.output.report_json);
            if let Some(svg) = self.output.plot_svg.as_mut() {
                place(svg);
            }
        }
    }

    pub fn problem(&self) -> Result<ProblemInstance, CliError> {
        match &self.problem {
            ProblemSpec::Builtin(name) => instances::builtin(name, self.seed),
            ProblemSpec::Inline(doc) => ProblemInstance::try_from(doc.as_ref()),
        }
        .map_err(|e| CliError::Config(format!("problem: {e}")))
    }

    /// Checks the invariants shared by every command and resolves methods.
    pub fn methods(&self, problem: &ProblemInstance) -> Result<Vec<Method>, CliError> {
        if self.methods.is_empty() {
            return Err(CliError::Config("\"methods\" must list at least one method".into()));
        }
        if self.horizon == 0 {
            return Err(CliError::Config("\"T\" must be positive".into()));
        }
        self.methods.iter().map(|m| self.method(m, problem)).collect()
    }

    fn method(&self, spec: &MethodSpec, problem: &ProblemInstance) -> Result<Method, CliError> {
        let kind = MethodKind::parse(&spec.name)
            .ok_or_else(|| CliError::Config(format!("unknown method \"{}\"", spec.name)))?;
        if kind.uses_schedule() {
            if spec.step.is_some() {
                return Err(CliError::Config(format!(
                    "method {kind} uses the anchored schedule and takes no \"step\""
                )));
            }
            let sched = StepSchedule::new(self.gamma, problem.lipschitz())
                .map_err(|e| CliError::Config(format!("method {kind}: {e}")))?;
            return Ok(match kind {
                MethodKind::ProximalAnchored => Method::ProximalAnchored(sched),
                _ => Method::Anchored(sched),
            });
        }
        let step = spec
            .step
            .unwrap_or_else(|| Method::default_constant_step(problem.lipschitz()));
        if !(step.is_finite() && step > 0.0) {
            return Err(CliError::Config(format!("method {kind}: step must be positive")));
        }
        Ok(match kind {
            MethodKind::Gradient => Method::Gradient { step },
            _ => Method::Extragradient { step },
        })
    }
}
