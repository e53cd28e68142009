use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use lambdachirp::{
    integrate, plateau_summary, presets, run_sweep, EquationVariant, SimulationConfig, SweepResult,
    SweepSpec, Trajectory,
};

use crate::config::{ConfigDocument, ParsedConfig, SolverSection};
use crate::error::CliError;
use crate::output::{
    config_document_from, manifest_path, write_sweep_csv, write_trajectory_csv, RunManifest,
};

/// Environment variable overriding the default sweep worker count.
pub const WORKERS_ENV: &str = "LAMBDACHIRP_WORKERS";
/// Points per axis of the built-in robustness map.
pub const FIGURE3_RESOLUTION: usize = 25;

#[derive(Debug, Clone, Default)]
pub struct RunOverrides {
    pub dt: Option<f64>,
    /// Total window length, centred on t = 0.
    pub t_span: Option<f64>,
    pub variant: Option<EquationVariant>,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn apply_overrides(doc: &mut ConfigDocument, o: &RunOverrides) {
    if o.dt.is_none() && o.t_span.is_none() && o.variant.is_none() {
        return;
    }
    let solver = doc.solver.get_or_insert_with(SolverSection::default);
    if let Some(dt) = o.dt {
        solver.dt = Some(dt);
    }
    if let Some(span) = o.t_span {
        solver.t_start = Some(-0.5 * span);
        solver.t_end = Some(0.5 * span);
    }
    if let Some(v) = o.variant {
        solver.variant = Some(v);
    }
}

/// Worker count: explicit value, then the environment override, then all CPUs.
pub fn resolve_workers(explicit: Option<usize>) -> Result<Option<usize>, CliError> {
    if explicit.is_some() {
        return Ok(explicit);
    }
    match std::env::var(WORKERS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .map(Some)
            .ok_or_else(|| CliError::Parse(format!("{WORKERS_ENV}={v} is not a positive integer"))),
        Err(_) => Ok(None),
    }
}

fn warn(cfg: &SimulationConfig) -> Vec<String> {
    let warnings: Vec<String> = cfg
        .validate()
        .map(|d| d.iter().map(|w| w.to_string()).collect())
        .unwrap_or_default();
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    warnings
}

/// Integrates `cfg` and writes `out` plus its manifest.
pub fn run_config(cfg: &SimulationConfig, kind: &str, out: &Path) -> Result<Trajectory, CliError> {
    let warnings = warn(cfg);
    let started = Instant::now();
    let traj = integrate(cfg)?;
    let mut manifest = RunManifest::new(kind, ConfigDocument::from_config(cfg), cfg.variant.as_str())
        .with_trajectory(&traj);
    manifest.wall_clock_seconds = started.elapsed().as_secs_f64();
    manifest.diagnostics.warnings = warnings;
    write_trajectory_csv(&traj, &manifest, out)?;
    Ok(traj)
}

pub fn run(config: &Path, out: &Path, overrides: &RunOverrides) -> Result<Trajectory, CliError> {
    let mut doc = config_document_from(&read(config)?)?;
    apply_overrides(&mut doc, overrides);
    let cfg = match doc.resolve()? {
        ParsedConfig::Run(cfg) => cfg,
        ParsedConfig::Sweep(_) => {
            return Err(CliError::Parse(
                "document has a [sweep] section; use the `sweep` command".into(),
            ))
        }
    };
    run_config(&cfg, "run", out)
}

/// Runs a sweep and writes its CSV and manifest. Failed cells are reported
/// as [`CliError::PartialSweep`] after the files are written.
pub fn sweep_spec(
    spec: &SweepSpec,
    kind: &str,
    out: &Path,
    workers: Option<usize>,
) -> Result<SweepResult, CliError> {
    let warnings = warn(&spec.base);
    let started = Instant::now();
    let result = run_sweep(spec, workers)?;
    let mut manifest = RunManifest::new(
        kind,
        ConfigDocument::from_sweep(spec),
        spec.base.variant.as_str(),
    );
    manifest.wall_clock_seconds = started.elapsed().as_secs_f64();
    let d = &mut manifest.diagnostics;
    d.warnings = warnings;
    d.max_trace_error = result
        .cells
        .iter()
        .filter_map(|c| match c.outcome {
            lambdachirp::CellOutcome::Ok { trace_error_max, .. } => Some(trace_error_max),
            _ => None,
        })
        .fold(0.0, f64::max);
    d.failed_cells = Some(result.failures());
    d.max_observable = result.max_value();
    d.plateau_fraction_045 = Some(plateau_summary(&result, 0.45)?.fraction);

    write_sweep_csv(&result, out)?;
    manifest.write(&manifest_path(out))?;
    if result.failures() > 0 {
        return Err(CliError::PartialSweep {
            failed: result.failures(),
            total: result.cells.len(),
        });
    }
    Ok(result)
}

pub fn sweep(config: &Path, out: &Path, workers: Option<usize>) -> Result<SweepResult, CliError> {
    let doc = config_document_from(&read(config)?)?;
    let spec = match doc.resolve()? {
        ParsedConfig::Sweep(spec) => spec,
        ParsedConfig::Run(_) => return Err(CliError::Parse("document has no [sweep] section".into())),
    };
    sweep_spec(&spec, "sweep", out, resolve_workers(workers)?)
}

/// Regenerates one of the built-in scenarios into `out_dir`, returning the
/// path of the data file.
pub fn reproduce(figure: u8, out_dir: &Path, workers: Option<usize>) -> Result<PathBuf, CliError> {
    match figure {
        2 => {
            let path = out_dir.join("figure2.csv");
            run_config(&presets::figure2(), "figure2", &path)?;
            Ok(path)
        }
        3 => {
            let path = out_dir.join("figure3.csv");
            let spec = presets::figure3(FIGURE3_RESOLUTION);
            sweep_spec(&spec, "figure3", &path, resolve_workers(workers)?)?;
            Ok(path)
        }
        4 => {
            let path = out_dir.join("figure4.csv");
            run_config(&presets::figure4(), "figure4", &path)?;
            Ok(path)
        }
        other => Err(CliError::Parse(format!(
            "no built-in configuration for figure {other} (expected 2, 3 or 4)"
        ))),
    }
}
