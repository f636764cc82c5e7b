use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::thread;

use pagd_core::analysis::{audit_run, check_scalar_bounds, AuditOptions, AuditReport, TheoremConstants};
use pagd_core::trace::RunTrace;
use pagd_core::{run, Error, Method, MethodKind, ProblemInstance, RunOptions};
use serde_json::{json, Value};

use crate::config::ExperimentConfig;
use crate::svg::{self, Series};
use crate::{CliError, Outcome};

fn execute(problem: &ProblemInstance, method: &Method, horizon: usize) -> Result<RunTrace, CliError> {
    run(problem, method, horizon, &RunOptions::default()).map_err(|e| match e {
        Error::NumericFailure { .. } => CliError::Numeric(format!("{}: {e}", method.kind())),
        other => CliError::Config(format!("{}: {other}", method.kind())),
    })
}

/// Theorem constants, available for schedule runs with a known solution.
fn constants_for(problem: &ProblemInstance, trace: &RunTrace) -> Option<TheoremConstants> {
    trace.gamma()?;
    TheoremConstants::from_trace(trace, problem.known_solution()?).ok()
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)
            .map_err(|e| CliError::Config(format!("cannot create {}: {e}", dir.display())))?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))
}

fn write_json(path: &Path, value: &Value) -> Result<(), CliError> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| CliError::Config(e.to_string()))?;
    writeln!(w).and_then(|_| w.flush()).map_err(|e| io_error(path, e))
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Config(format!("cannot write {}: {e}", path.display()))
}

fn write_trace(path: &Path, trace: &RunTrace, constants: Option<&TheoremConstants>) -> Result<(), CliError> {
    let w = create(path)?;
    trace.write_csv(w, constants).map_err(|e| io_error(path, e))?;
    write_json(&path.with_extension("meta.json"), &trace.metadata_json())
}

/// `trace.csv` for a single method, `trace.<method>.csv` for several.
fn trace_path(base: &Path, kind: MethodKind, several: bool) -> PathBuf {
    if !several {
        return base.to_path_buf();
    }
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("trace");
    let ext = base.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    base.with_file_name(format!("{stem}.{kind}.{ext}"))
}

fn method_summary(trace: &RunTrace, constants: Option<&TheoremConstants>) -> Value {
    let last = trace.last();
    let bound = constants.and_then(|k| {
        let thm = k.residual_bound(last.t)?;
        let explicit = k.explicit_bound(last.t)?;
        Some(json!({
            "H0": k.h0,
            "D": k.d,
            "E": k.e,
            "cert_bound": thm,
            "cert_margin": last.certificate_residual.map(|c| thm - c),
            "explicit_bound": explicit,
            "tan_margin": last.tangent_residual.map(|r| explicit - r),
        }))
    });
    json!({
        "method": trace.metadata.method,
        "step_rule": trace.metadata.step_rule,
        "iterations": trace.metadata.iterations,
        "diverged": trace.metadata.diverged,
        "final": {
            "t": last.t,
            "cert_residual": last.certificate_residual,
            "nat_residual": last.natural_residual,
            "tan_residual": last.tangent_residual,
            "anchor_dist": last.anchor_distance,
        },
        "bound": bound,
    })
}

fn header(config: &ExperimentConfig, command: &str, problem: &ProblemInstance) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("command".into(), json!(command));
    m.insert("problem".into(), json!(problem.label()));
    m.insert("dim".into(), json!(problem.dim()));
    m.insert("L".into(), json!(problem.lipschitz()));
    m.insert("T".into(), json!(config.horizon));
    m.insert("gamma".into(), json!(config.gamma));
    m.insert("seed".into(), json!(config.seed));
    m
}

fn reject_fault_injection(config: &ExperimentConfig, command: &str) -> Result<(), CliError> {
    if config.fault_injection.is_some() {
        return Err(CliError::Config(format!("\"fault_injection\" is not used by {command}")));
    }
    Ok(())
}

pub fn cmd_run(config: &ExperimentConfig) -> Result<Outcome, CliError> {
    reject_fault_injection(config, "run")?;
    let problem = config.problem()?;
    let methods = config.methods(&problem)?;
    let several = methods.len() > 1;
    let mut summaries = Vec::new();
    for method in &methods {
        let trace = execute(&problem, method, config.horizon)?;
        let constants = constants_for(&problem, &trace);
        let path = trace_path(&config.output.trace_csv, method.kind(), several);
        write_trace(&path, &trace, constants.as_ref())?;
        let mut summary = method_summary(&trace, constants.as_ref());
        summary["trace_csv"] = json!(path);
        println!(
            "{:<6} iterations={} diverged={} cert={} tan={}",
            method.kind().name(),
            trace.metadata.iterations,
            trace.metadata.diverged,
            fmt_opt(trace.last().certificate_residual),
            fmt_opt(trace.last().tangent_residual),
        );
        summaries.push(summary);
    }
    let mut report = header(config, "run", &problem);
    report.insert("methods".into(), Value::Array(summaries));
    write_json(&config.output.report_json, &Value::Object(report))?;
    Ok(Outcome::Pass)
}

pub fn cmd_audit(config: &ExperimentConfig) -> Result<Outcome, CliError> {
    let problem = config.problem()?;
    let methods = config.methods(&problem)?;
    let method = methods
        .iter()
        .find(|m| m.kind() == MethodKind::ProximalAnchored)
        .ok_or_else(|| CliError::Config("audit needs a \"p-agd\" method in \"methods\"".into()))?;
    if methods.len() > 1 {
        eprintln!("audit: only the p-agd run is audited; other methods are ignored");
    }
    let mut trace = execute(&problem, method, config.horizon)?;
    // Constants come from the clean run so injected faults cannot hide.
    let constants = constants_for(&problem, &trace);
    if let Some(fault) = config.fault_injection {
        for r in &mut trace.records {
            r.d_norm = r.d_norm.map(|d| d * fault.d_norm_scale);
        }
    }
    let options = AuditOptions {
        seed: config.seed,
        ..AuditOptions::default()
    };
    let reports = audit_run(&problem, &trace, constants.as_ref(), &options)
        .map_err(|e| CliError::Config(format!("audit: {e}")))?;
    write_trace(&config.output.trace_csv, &trace, constants.as_ref())?;

    let pass = reports.iter().all(|r| !r.failed());
    for r in &reports {
        println!("{:<5} {:<18} max_violation={:e}{}", status(r), r.check, r.max_violation, argmax(r));
    }
    let mut report = header(config, "audit", &problem);
    report.insert("pass".into(), json!(pass));
    report.insert("constants".into(), json!(constants));
    report.insert(
        "fault_injection".into(),
        json!(config.fault_injection.map(|f| json!({ "d_norm_scale": f.d_norm_scale }))),
    );
    report.insert("run".into(), method_summary(&trace, constants.as_ref()));
    report.insert("checks".into(), json!(reports));
    write_json(&config.output.report_json, &Value::Object(report))?;
    println!("audit {}", if pass { "passed" } else { "FAILED" });
    Ok(if pass { Outcome::Pass } else { Outcome::AuditFailed })
}

fn status(r: &AuditReport) -> &'static str {
    match (r.applicable, r.pass) {
        (false, _) => "N/A",
        (true, true) => "PASS",
        (true, false) => "FAIL",
    }
}

fn argmax(r: &AuditReport) -> String {
    match (r.failed(), r.argmax_t) {
        (true, Some(t)) => format!(" at t={t}"),
        _ => String::new(),
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "-".into(), |v| format!("{v:.3e}"))
}

pub fn cmd_compare(config: &ExperimentConfig) -> Result<Outcome, CliError> {
    reject_fault_injection(config, "compare")?;
    let problem = config.problem()?;
    let methods = config.methods(&problem)?;
    if methods.len() < 2 {
        return Err(CliError::Config("compare needs at least two methods".into()));
    }
    let traces: Vec<Result<RunTrace, CliError>> = thread::scope(|s| {
        let handles: Vec<_> = methods
            .iter()
            .map(|m| s.spawn(|| execute(&problem, m, config.horizon)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("method run panicked"))
            .collect()
    });
    let traces = traces.into_iter().collect::<Result<Vec<_>, _>>()?;
    let constants: Vec<Option<TheoremConstants>> =
        traces.iter().map(|t| constants_for(&problem, t)).collect();

    let path = &config.output.trace_csv;
    let mut w = csv::Writer::from_writer(create(path)?);
    let csv_err = |e: csv::Error| CliError::Config(format!("cannot write {}: {e}", path.display()));
    let mut head = vec!["method".to_string()];
    head.extend(RunTrace::csv_header(problem.dim()));
    w.write_record(&head).map_err(csv_err)?;
    for (trace, k) in traces.iter().zip(&constants) {
        for row in trace.csv_rows(k.as_ref()) {
            w.write_field(trace.metadata.method.name()).map_err(csv_err)?;
            w.write_record(&row).map_err(csv_err)?;
        }
    }
    w.flush().map_err(|e| io_error(path, e))?;

    if let Some(svg_path) = &config.output.plot_svg {
        let series: Vec<Series> = traces
            .iter()
            .filter(|t| !t.metadata.diverged)
            .map(|t| Series {
                name: t.metadata.method.name().to_string(),
                points: t
                    .records
                    .iter()
                    .filter_map(|r| r.tangent_residual.or(r.certificate_residual).map(|v| (r.t as f64, v)))
                    .collect(),
            })
            .collect();
        let title = format!("{}: tangent residual", problem.label());
        let doc = svg::render(&title, "min ||F(z_t) + c||, c in A(z_t)", &series);
        let mut f = create(svg_path)?;
        f.write_all(doc.as_bytes())
            .and_then(|_| f.flush())
            .map_err(|e| io_error(svg_path, e))?;
    }

    println!("{:<6} {:>10} {:>9} {:>12} {:>12}", "method", "iterations", "diverged", "cert", "tan");
    for t in &traces {
        println!(
            "{:<6} {:>10} {:>9} {:>12} {:>12}",
            t.metadata.method.name(),
            t.metadata.iterations,
            t.metadata.diverged,
            fmt_opt(t.last().certificate_residual),
            fmt_opt(t.last().tangent_residual),
        );
    }
    let mut report = header(config, "compare", &problem);
    report.insert(
        "methods".into(),
        Value::Array(
            traces
                .iter()
                .zip(&constants)
                .map(|(t, k)| method_summary(t, k.as_ref()))
                .collect(),
        ),
    );
    report.insert("trace_csv".into(), json!(path));
    report.insert("plot_svg".into(), json!(config.output.plot_svg));
    write_json(&config.output.report_json, &Value::Object(report))?;
    Ok(Outcome::Pass)
}

pub fn cmd_check_scalars(gamma: f64, t_max: u64, out_dir: Option<&Path>) -> Result<Outcome, CliError> {
    let report = check_scalar_bounds(gamma, t_max).map_err(|e| CliError::Config(e.to_string()))?;
    let value = json!(report);
    println!("{}", serde_json::to_string_pretty(&value).expect("report serializes"));
    if let Some(dir) = out_dir {
        write_json(&dir.join("scalars.json"), &value)?;
    }
    Ok(if report.pass { Outcome::Pass } else { Outcome::AuditFailed })
}
