//! CSV files and their manifest sidecars.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use lambdachirp::{CellOutcome, SweepResult, Trajectory, VERSION};
use serde::{Deserialize, Serialize};

use crate::config::ConfigDocument;
use crate::error::CliError;

pub const TRAJECTORY_HEADER: &str = "t_fs,rho11,rho22,rho33,re_rho21,im_rho21,abs_rho21,re_rho31,im_rho31,re_rho32,im_rho32,rho_BB,rho_DD,trace_err,purity";
pub const SWEEP_HEADER: &str = "param1,param2,observable,status";

/// Formats like C's `%.12g`: 12 significant digits, fixed notation for
/// decimal exponents in [−4, 12), trailing zeros removed.
pub fn format_sig12(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..12).contains(&exp) {
        let fixed = format!("{:.*}", (11 - exp) as usize, x);
        trim_fraction(&fixed).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_fraction(mantissa), sign, exp.abs())
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn join_row(values: &[f64]) -> String {
    values
        .iter()
        .map(|&v| format_sig12(v))
        .collect::<Vec<_>>()
        .join(",")
}

pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut out = String::with_capacity(64 + traj.len() * 200);
    out.push_str(TRAJECTORY_HEADER);
    out.push('\n');
    for s in &traj.samples {
        out.push_str(&join_row(&s.values()));
        out.push('\n');
    }
    out
}

pub fn sweep_csv(result: &SweepResult) -> String {
    let mut out = String::with_capacity(64 + result.cells.len() * 48);
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for cell in &result.cells {
        let (value, status) = match &cell.outcome {
            CellOutcome::Ok { value, .. } => (*value, "ok"),
            CellOutcome::Failed { .. } => (f64::NAN, "failed"),
        };
        let _ = writeln!(
            out,
            "{},{},{},{}",
            format_sig12(cell.param1),
            format_sig12(cell.param2),
            format_sig12(value),
            status
        );
    }
    out
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

/// `out.csv` → `out.manifest.toml`.
pub fn manifest_path(data_path: &Path) -> PathBuf {
    data_path.with_extension("manifest.toml")
}

/// Writes the trajectory CSV and its manifest sidecar.
pub fn write_trajectory_csv(
    traj: &Trajectory,
    manifest: &RunManifest,
    path: &Path,
) -> Result<(), CliError> {
    if traj.is_empty() {
        return Err(CliError::Invalid(lambdachirp::Error::EmptyTrajectory));
    }
    write_file(path, &trajectory_csv(traj))?;
    manifest.write(&manifest_path(path))
}

/// Writes the sweep grid CSV. The manifest is written separately with
/// [`RunManifest::write`].
pub fn write_sweep_csv(result: &SweepResult, path: &Path) -> Result<(), CliError> {
    write_file(path, &sweep_csv(result))
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestDiagnostics {
    pub max_trace_error: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_hermiticity_error: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_purity: Option<f64>,
    #[serde(default)]
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failed_cells: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_observable: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plateau_fraction_045: Option<f64>,
}

/// Everything needed to reproduce an output file, plus run diagnostics.
/// `config` is a complete config document that `run`/`sweep` accept as is.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub tool_version: String,
    pub kind: String,
    pub equation_variant: String,
    pub wall_clock_seconds: f64,
    pub diagnostics: ManifestDiagnostics,
    pub config: ConfigDocument,
}

impl RunManifest {
    pub fn new(kind: &str, config: ConfigDocument, equation_variant: &str) -> Self {
        RunManifest {
            tool_version: VERSION.to_string(),
            kind: kind.to_string(),
            equation_variant: equation_variant.to_string(),
            wall_clock_seconds: 0.0,
            diagnostics: ManifestDiagnostics::default(),
            config,
        }
    }

    pub fn with_trajectory(mut self, traj: &Trajectory) -> Self {
        self.diagnostics.max_trace_error = traj.max_trace_error();
        self.diagnostics.max_hermiticity_error = Some(traj.max_hermiticity_error());
        self.diagnostics.min_purity = Some(traj.min_purity());
        self
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("manifests always serialize")
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        write_file(path, &self.to_toml())
    }
}

/// Whether a TOML document is a manifest rather than a bare config.
pub fn is_manifest(text: &str) -> bool {
    text.parse::<toml::Table>()
        .map(|t| t.contains_key("tool_version") && t.contains_key("config"))
        .unwrap_or(false)
}

/// Extracts the config document from either a manifest or a plain config.
pub fn config_document_from(text: &str) -> Result<ConfigDocument, CliError> {
    if is_manifest(text) {
        let m: RunManifest = toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        Ok(m.config)
    } else {
        crate::config::parse_document(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig12_matches_printf_g() {
        let cases = [
            (0.0, "0"),
            (-0.0, "0"),
            (1.0, "1"),
            (0.5, "0.5"),
            (-22.45, "-22.45"),
            (1.0 / 3.0, "0.333333333333"),
            (2.0 / 3.0, "0.666666666667"),
            (123456.789, "123456.789"),
            (1e-5, "1e-05"),
            (1.5e-5, "1.5e-05"),
            (0.0001, "0.0001"),
            (3.8413716652e-14, "3.8413716652e-14"),
            (999999999999.5, "1e+12"),
            (123456789012.0, "123456789012"),
            (2.0e22, "2e+22"),
            (0.99999999999999, "1"),
        ];
        for (x, s) in cases {
            assert_eq!(format_sig12(x), s, "{x:e}");
        }
    }

    #[test]
    fn sig12_round_trip_precision() {
        for &x in &[0.497372020219983, -4.49e-3, 6.02214076e23, 1.0 - 1e-13] {
            let back: f64 = format_sig12(x).parse().unwrap();
            assert!((back - x).abs() <= 5e-12 * x.abs());
        }
    }

    #[test]
    fn manifest_sidecar_name() {
        assert_eq!(
            manifest_path(Path::new("out/fig2.csv")),
            PathBuf::from("out/fig2.manifest.toml")
        );
    }
}
