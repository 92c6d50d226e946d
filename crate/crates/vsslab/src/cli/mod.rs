//! Scenario parsing, subcommands, and artifact emission: CSV traces, metric
//! reports, comparison tables, stability reports, and static SVG plots.

mod csv;
mod report;
mod scenario_text;
mod svg;

pub use csv::{csv_columns, csv_header, roundtrip_check, sweep_header, trace_to_csv};
pub use report::{comparison_table, metrics_text, stability_text};
pub use scenario_text::{
    dump_scenario, parse_scenario, parse_sweep_axes, scenario_hash, ScenarioError,
};
pub use svg::{available_signals, emit_plot};

use crate::numerics::Vector;
use crate::plant::{auv_nominal, build_model_bank};
use crate::sim::{compute_metrics, run_simulation, ControllerKind, Metrics, Scenario, SimError, SimTrace};
use crate::stability::{
    check_free_regime, check_multi_gain, check_reduced_surface, check_state_feedback,
    estimate_gain_bound, find_common_p, CommonPResult, StabilityReport,
};
use crate::surfaces::SlidingSurfaceSpec;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use thiserror::Error;

/// Environment variable capping the worker pool for compare and sweep runs.
pub const THREADS_ENV: &str = "VSSLAB_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Diverged(String),
    #[error("stability checks failed; see {0}")]
    StabilityFailed(String),
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    /// Documented exit codes: 0 ok, 2 validation, 3 diverged, 4 stability.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Diverged(_) => 3,
            CliError::StabilityFailed(_) => 4,
            CliError::Io { .. } => 1,
        }
    }
}

impl From<ScenarioError> for CliError {
    fn from(e: ScenarioError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Diverged { .. } => CliError::Diverged(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

/// Files produced by a successful command.
#[derive(Debug, Default)]
pub struct RunArtifacts {
    pub trace_paths: Vec<PathBuf>,
    pub metrics_paths: Vec<PathBuf>,
    pub plot_paths: Vec<PathBuf>,
    pub report_paths: Vec<PathBuf>,
    pub summary: String,
}

/// Shared command-line options.
#[derive(Debug, Clone)]
pub struct CommonArgs {
    pub scenario_path: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub seed: Option<u64>,
    pub plots: Vec<String>,
    pub band: f64,
}

#[derive(Debug, Clone)]
pub enum CliCommand {
    Simulate(CommonArgs),
    Compare(CommonArgs),
    Stability(CommonArgs),
    Sweep(CommonArgs),
}

fn read_scenario_doc(args: &CommonArgs) -> Result<String, CliError> {
    match &args.scenario_path {
        None => Ok(String::new()),
        Some(path) => std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
    }
}

fn load_scenario(args: &CommonArgs) -> Result<Scenario, CliError> {
    let doc = read_scenario_doc(args)?;
    let mut sc = parse_scenario(&doc).map_err(|e| {
        let ctx = args
            .scenario_path
            .as_ref()
            .map(|p| format!("{}: ", p.display()))
            .unwrap_or_default();
        CliError::Validation(format!("{ctx}{e}"))
    })?;
    if let Some(seed) = args.seed {
        sc.seed = seed;
    }
    if !(args.band > 0.0) {
        return Err(CliError::Validation("--band must be positive".to_string()));
    }
    Ok(sc)
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|source| CliError::Io {
            path: parent.display().to_string(),
            source,
        })?;
    }
    std::fs::write(path, content).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Worker-pool size: the env cap, else available parallelism, never above
/// the job count.
fn pool_size(jobs: usize) -> usize {
    let available = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let cap = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or(available);
    cap.min(jobs).max(1)
}

/// Run `jobs` closures over the worker pool; results are returned in job
/// order regardless of scheduling, so output content never depends on the
/// pool size.
pub fn run_parallel<T, F>(jobs: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let threads = pool_size(jobs);
    if threads == 1 || jobs <= 1 {
        return (0..jobs).map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<T>>> = Mutex::new((0..jobs).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                if idx >= jobs {
                    break;
                }
                let out = f(idx);
                results.lock().unwrap()[idx] = Some(out);
            });
        }
    });
    results
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|slot| slot.expect("every job ran"))
        .collect()
}

struct RunOutput {
    trace: SimTrace,
    metrics: Metrics,
}

fn run_one(sc: &Scenario, band: f64) -> Result<RunOutput, CliError> {
    let trace = run_simulation(sc)?;
    let metrics = compute_metrics(&trace, sc.z_ref, band)?;
    Ok(RunOutput { trace, metrics })
}

fn emit_run_artifacts(
    dir: &Path,
    sc: &Scenario,
    out: &RunOutput,
    plots: &[String],
    band: f64,
    artifacts: &mut RunArtifacts,
) -> Result<(), CliError> {
    let trace_path = dir.join("trace.csv");
    write_file(&trace_path, &trace_to_csv(&out.trace))?;
    artifacts.trace_paths.push(trace_path);

    let metrics_path = dir.join("metrics.txt");
    write_file(&metrics_path, &metrics_text(sc.controller, &out.metrics, &out.trace, band))?;
    artifacts.metrics_paths.push(metrics_path);

    let resolved_path = dir.join("scenario.resolved.txt");
    write_file(&resolved_path, &dump_scenario(sc))?;
    artifacts.report_paths.push(resolved_path);

    for signal in plots {
        let svg = emit_plot(&out.trace, signal).map_err(CliError::Validation)?;
        let plot_path = dir.join(format!("{signal}.svg"));
        write_file(&plot_path, &svg)?;
        artifacts.plot_paths.push(plot_path);
    }
    Ok(())
}

/// Run the five-controller comparison on one base scenario. All runs are
/// computed before anything is reported, so a failure yields no partial
/// table.
pub fn run_comparison(
    base: &Scenario,
    band: f64,
) -> Result<Vec<(ControllerKind, SimTrace, Metrics)>, CliError> {
    let scenarios: Vec<Scenario> =
        ControllerKind::ALL.iter().map(|k| base.clone().with_controller(*k)).collect();
    let results = run_parallel(scenarios.len(), |i| run_one(&scenarios[i], band));
    let mut rows = Vec::with_capacity(results.len());
    for (kind, res) in ControllerKind::ALL.iter().zip(results) {
        let out = res?;
        rows.push((*kind, out.trace, out.metrics));
    }
    Ok(rows)
}

fn cmd_simulate(args: &CommonArgs) -> Result<RunArtifacts, CliError> {
    let sc = load_scenario(args)?;
    let out = run_one(&sc, args.band)?;
    let mut artifacts = RunArtifacts::default();
    emit_run_artifacts(&args.out_dir, &sc, &out, &args.plots, args.band, &mut artifacts)?;
    artifacts.summary = format!(
        "{}: settling_time = {}, chattering_index = {:.3}, switching_count = {}",
        sc.controller.name(),
        if out.metrics.settling_time.is_infinite() {
            "never".to_string()
        } else {
            format!("{:.3} s", out.metrics.settling_time)
        },
        out.metrics.chattering_index,
        out.metrics.switching_count
    );
    Ok(artifacts)
}

fn cmd_compare(args: &CommonArgs) -> Result<RunArtifacts, CliError> {
    for signal in &args.plots {
        if !["z", "u", "s", "validities"].contains(&signal.as_str()) {
            return Err(CliError::Validation(format!(
                "unknown plot signal `{signal}`; valid: z, u, s, validities"
            )));
        }
    }
    let base = load_scenario(args)?;
    let rows = run_comparison(&base, args.band)?;
    let mut artifacts = RunArtifacts::default();
    for (kind, trace, metrics) in &rows {
        let sc = base.clone().with_controller(*kind);
        let out = RunOutput { trace: trace.clone(), metrics: *metrics };
        // each run plots the requested signals it actually has; validities
        // only exist for the multimodel controllers
        let plots: Vec<String> = args
            .plots
            .iter()
            .filter(|signal| available_signals(trace).contains(&signal.as_str()))
            .cloned()
            .collect();
        emit_run_artifacts(
            &args.out_dir.join(kind.name()),
            &sc,
            &out,
            &plots,
            args.band,
            &mut artifacts,
        )?;
    }
    let table =
        comparison_table(&rows.iter().map(|(k, _, m)| (*k, *m)).collect::<Vec<_>>());
    let table_path = args.out_dir.join("compare.txt");
    write_file(&table_path, &table)?;
    artifacts.report_paths.push(table_path);
    artifacts.summary = table;
    Ok(artifacts)
}

/// Effective linear feedback rows of the fused laws, used by the
/// state-feedback check. The smooth core of each partial law is linear in
/// the state; the relay and the branch asymmetry are excluded.
fn effective_gain_rows(sc: &Scenario) -> Result<Vec<Vector>, CliError> {
    let bank = build_model_bank(&auv_nominal(), sc.bank_n, sc.bank_delta)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    let mut rows = Vec::with_capacity(bank.len());
    for (j, model) in bank.models.iter().enumerate() {
        let spec = match sc.controller {
            ControllerKind::SmmmMulti => &sc.multi_surfaces[j],
            _ => &sc.surface,
        };
        let c = spec.c_eff();
        let cb = c.dot(&model.b_vector());
        if cb.abs() < 1e-12 {
            return Err(CliError::Validation(format!("surface degenerate for submodel {j}")));
        }
        let ca = Vector::new(
            (0..4).map(|col| (0..4).map(|r| c[r] * model.a[(r, col)]).sum::<f64>()).collect(),
        );
        let row = match sc.controller {
            ControllerKind::Smc1 | ControllerKind::Smc2 => ca.scale(1.0 / cb),
            ControllerKind::Smmm1 | ControllerKind::Smmm2 => {
                ca.scale(1.0 / cb).axpy(sc.smmm_gains[j], &c)
            }
            ControllerKind::SmmmMulti => ca
                .add(&c.scale(sc.m_bound))
                .scale(1.0 / cb)
                .axpy(sc.smmm_gains[j], &c),
        };
        rows.push(row);
    }
    Ok(rows)
}

fn cmd_stability(args: &CommonArgs) -> Result<RunArtifacts, CliError> {
    let sc = load_scenario(args)?;
    let bank = build_model_bank(&auv_nominal(), sc.bank_n, sc.bank_delta)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    let mut reports: Vec<StabilityReport> = Vec::new();
    let mut skipped: Vec<String> = Vec::new();
    let tol = 1e-9;

    // gain bound on the scenario surface (informational prerequisite of the
    // reaching checks)
    let gb = estimate_gain_bound(&auv_nominal(), &sc.surface, sc.m_bound, 2.0, 5000, sc.seed)
        .map_err(|e| CliError::Validation(e.to_string()))?;

    // free regime: search a common P for the open-loop bank
    let open: Vec<_> = bank.models.iter().map(|m| m.a.clone()).collect();
    match find_common_p(&open, tol, 2000).map_err(|e| CliError::Validation(e.to_string()))? {
        CommonPResult::Found(p) => {
            reports.push(
                check_free_regime(&bank, &p, tol)
                    .map_err(|e| CliError::Validation(e.to_string()))?,
            );
        }
        CommonPResult::Infeasible { best_margin } => {
            let mut rep = StabilityReport {
                condition: "free-regime common Lyapunov".to_string(),
                pass: false,
                margin: best_margin,
                witness: None,
                seed: None,
                samples: None,
                notes: vec![
                    "no common P found by the heuristic search (the open-loop bank contains \
                     a depth integrator, so none exists)"
                        .to_string(),
                ],
            };
            rep.notes.push(format!("gain bound on the scenario surface: k_min = {}", gb.k_min));
            reports.push(rep);
        }
    }

    // state feedback with the effective rows of the scenario's law
    let rows = effective_gain_rows(&sc)?;
    let closed: Vec<_> = bank
        .models
        .iter()
        .zip(&rows)
        .map(|(m, k)| m.a.sub(&crate::numerics::Matrix::outer(&m.b_vector(), k)))
        .collect();
    match find_common_p(&closed, tol, 2000).map_err(|e| CliError::Validation(e.to_string()))? {
        CommonPResult::Found(p) => {
            reports.push(
                check_state_feedback(&bank, &rows, &p, tol)
                    .map_err(|e| CliError::Validation(e.to_string()))?,
            );
        }
        CommonPResult::Infeasible { best_margin } => {
            reports.push(StabilityReport {
                condition: "state-feedback common Lyapunov".to_string(),
                pass: false,
                margin: best_margin,
                witness: None,
                seed: None,
                samples: None,
                notes: vec!["no common P found by the heuristic search".to_string()],
            });
        }
    }

    // reduced sliding dynamics: applicable to reduced-form surfaces only
    let l_rows: Option<Vec<Vector>> = match sc.controller {
        ControllerKind::SmmmMulti => sc
            .multi_surfaces
            .iter()
            .map(|s| match s {
                SlidingSurfaceSpec::Reduced { l } => Some(l.clone()),
                SlidingSurfaceSpec::FullRow { .. } => None,
            })
            .collect(),
        _ => match &sc.surface {
            SlidingSurfaceSpec::Reduced { l } => Some(vec![l.clone(); bank.len()]),
            SlidingSurfaceSpec::FullRow { .. } => None,
        },
    };
    match l_rows {
        Some(ls) => {
            let reduced: Vec<_> = bank
                .models
                .iter()
                .zip(&ls)
                .map(|(m, l)| crate::stability::reduced_sliding_matrix(m, l))
                .collect::<Result<_, _>>()
                .map_err(|e| CliError::Validation(e.to_string()))?;
            match find_common_p(&reduced, tol, 2000)
                .map_err(|e| CliError::Validation(e.to_string()))?
            {
                CommonPResult::Found(p) => reports.push(
                    check_reduced_surface(&bank, &ls, &p, tol)
                        .map_err(|e| CliError::Validation(e.to_string()))?,
                ),
                CommonPResult::Infeasible { best_margin } => {
                    reports.push(StabilityReport {
                        condition: "reduced sliding dynamics".to_string(),
                        pass: false,
                        margin: best_margin,
                        witness: None,
                        seed: None,
                        samples: None,
                        notes: vec!["no reduced-order common P found".to_string()],
                    });
                }
            }
        }
        None => skipped.push(
            "reduced sliding dynamics (the scenario uses full-row surfaces; the substitution \
             reduction applies to reduced-form surfaces)"
                .to_string(),
        ),
    }

    // aggregate gain bound for the multi-surface law
    if sc.controller == ControllerKind::SmmmMulti {
        reports.push(
            check_multi_gain(
                &bank,
                &sc.multi_surfaces,
                &sc.smmm_mu,
                sc.m_bound,
                &sc.smmm_gains,
                2.0,
                5000,
                sc.seed,
            )
            .map_err(|e| CliError::Validation(e.to_string()))?,
        );
    } else {
        skipped.push("aggregate-surface gain bound (multi-surface controller only)".to_string());
    }

    let text = stability_text(&reports, &skipped);
    let report_path = args.out_dir.join("stability.txt");
    write_file(&report_path, &text)?;
    let mut artifacts = RunArtifacts::default();
    artifacts.report_paths.push(report_path.clone());
    artifacts.summary = text;
    if reports.iter().any(|r| !r.pass) {
        return Err(CliError::StabilityFailed(report_path.display().to_string()));
    }
    Ok(artifacts)
}

fn cmd_sweep(args: &CommonArgs) -> Result<RunArtifacts, CliError> {
    let doc = read_scenario_doc(args)?;
    let axes = parse_sweep_axes(&doc)?;
    if axes.is_empty() {
        return Err(CliError::Validation(
            "sweep needs at least one `sweep.<key> = v1, v2, ...` line".to_string(),
        ));
    }
    let total: usize = axes.iter().map(|(_, vals)| vals.len()).product();
    if total > 4096 {
        return Err(CliError::Validation(format!(
            "sweep grid of {total} runs exceeds the limit of 4096"
        )));
    }

    // strip sweep lines and any base assignment of a swept key (the axis
    // value replaces it per combination)
    let base_doc: String = doc
        .lines()
        .filter(|l| {
            let trimmed = l.trim_start();
            if trimmed.starts_with("sweep.") {
                return false;
            }
            let key = trimmed.split('=').next().unwrap_or("").trim();
            !axes.iter().any(|(axis, _)| axis == key)
        })
        .map(|l| format!("{l}\n"))
        .collect();

    // cartesian product, first axis slowest
    let mut combos: Vec<Vec<usize>> = vec![Vec::new()];
    for (_, vals) in &axes {
        let mut next = Vec::with_capacity(combos.len() * vals.len());
        for combo in &combos {
            for i in 0..vals.len() {
                let mut c = combo.clone();
                c.push(i);
                next.push(c);
            }
        }
        combos = next;
    }

    let mut scenarios = Vec::with_capacity(combos.len());
    for combo in &combos {
        let mut doc = base_doc.clone();
        for (axis, &value_idx) in axes.iter().zip(combo) {
            doc.push_str(&format!("{} = {}\n", axis.0, axis.1[value_idx]));
        }
        let mut sc = parse_scenario(&doc)?;
        if let Some(seed) = args.seed {
            sc.seed = seed;
        }
        scenarios.push(sc);
    }

    let results = run_parallel(scenarios.len(), |i| run_one(&scenarios[i], args.band));
    let axis_names: Vec<String> = axes.iter().map(|(k, _)| k.clone()).collect();
    let mut table = String::new();
    table.push_str(&sweep_header(&axis_names));
    table.push('\n');
    for (combo, (sc, res)) in combos.iter().zip(scenarios.iter().zip(results)) {
        let out = res?;
        let m = out.metrics;
        let mut row = vec![sc.controller.name().to_string()];
        for (axis, &value_idx) in axes.iter().zip(combo) {
            row.push(axis.1[value_idx].clone());
        }
        for v in [
            m.settling_time,
            m.overshoot,
            m.control_sup,
            m.control_effort,
            m.chattering_index,
        ] {
            row.push(if v.is_infinite() { "inf".to_string() } else { v.to_string() });
        }
        row.push(m.switching_count.to_string());
        table.push_str(&row.join(","));
        table.push('\n');
    }
    let path = args.out_dir.join("sweep.csv");
    write_file(&path, &table)?;
    let mut artifacts = RunArtifacts::default();
    artifacts.report_paths.push(path);
    artifacts.summary = format!("{} runs swept over {} axes", combos.len(), axes.len());
    Ok(artifacts)
}

/// Execute one subcommand.
pub fn run_command(cmd: &CliCommand) -> Result<RunArtifacts, CliError> {
    match cmd {
        CliCommand::Simulate(args) => cmd_simulate(args),
        CliCommand::Compare(args) => cmd_compare(args),
        CliCommand::Stability(args) => cmd_stability(args),
        CliCommand::Sweep(args) => cmd_sweep(args),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_results_ordered_by_job() {
        let out = run_parallel(17, |i| i * 3);
        assert_eq!(out, (0..17).map(|i| i * 3).collect::<Vec<_>>());
    }

    #[test]
    fn effective_rows_reject_degenerate_surface() {
        let mut sc = Scenario::default_scenario();
        sc.surface =
            SlidingSurfaceSpec::full_row(Vector::from_slice(&[0.0, 0.0, 1.0, 0.0])).unwrap();
        assert!(effective_gain_rows(&sc).is_err());
    }
}
