//! Two-parameter grid sweeps over simulation configurations.
//!
//! Cells are independent runs, so they are mapped in parallel and collected
//! in grid order. Results do not depend on the worker count.

use std::collections::VecDeque;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{integrate, EquationVariant, SimulationConfig};
use crate::error::{Error, Result};
use crate::trajectory::{final_observables, FinalObservables};

/// Scalar configuration parameters that can be swept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SweepParameter {
    #[serde(rename = "pulse1.peak_rabi")]
    Pulse1PeakRabi,
    #[serde(rename = "pulse2.peak_rabi")]
    Pulse2PeakRabi,
    #[serde(rename = "pulse1.chirp")]
    Pulse1Chirp,
    #[serde(rename = "pulse2.chirp")]
    Pulse2Chirp,
    /// Sets χ₁ = χ₂.
    #[serde(rename = "chirp_both")]
    ChirpBoth,
    #[serde(rename = "pulse1.width")]
    Pulse1Width,
    #[serde(rename = "pulse2.width")]
    Pulse2Width,
}

impl SweepParameter {
    pub const ALL: [SweepParameter; 7] = [
        SweepParameter::Pulse1PeakRabi,
        SweepParameter::Pulse2PeakRabi,
        SweepParameter::Pulse1Chirp,
        SweepParameter::Pulse2Chirp,
        SweepParameter::ChirpBoth,
        SweepParameter::Pulse1Width,
        SweepParameter::Pulse2Width,
    ];

    pub fn path(&self) -> &'static str {
        match self {
            SweepParameter::Pulse1PeakRabi => "pulse1.peak_rabi",
            SweepParameter::Pulse2PeakRabi => "pulse2.peak_rabi",
            SweepParameter::Pulse1Chirp => "pulse1.chirp",
            SweepParameter::Pulse2Chirp => "pulse2.chirp",
            SweepParameter::ChirpBoth => "chirp_both",
            SweepParameter::Pulse1Width => "pulse1.width",
            SweepParameter::Pulse2Width => "pulse2.width",
        }
    }

    pub fn apply(&self, config: &mut SimulationConfig, value: f64) {
        match self {
            SweepParameter::Pulse1PeakRabi => config.pulse1.peak_rabi = value,
            SweepParameter::Pulse2PeakRabi => config.pulse2.peak_rabi = value,
            SweepParameter::Pulse1Chirp => config.pulse1.chirp = value,
            SweepParameter::Pulse2Chirp => config.pulse2.chirp = value,
            SweepParameter::ChirpBoth => {
                config.pulse1.chirp = value;
                config.pulse2.chirp = value;
            }
            SweepParameter::Pulse1Width => config.pulse1.width = value,
            SweepParameter::Pulse2Width => config.pulse2.width = value,
        }
    }

    /// Parameters that touch the same configuration field.
    fn overlaps(&self, other: &SweepParameter) -> bool {
        use SweepParameter::*;
        self == other
            || matches!(
                (self, other),
                (ChirpBoth, Pulse1Chirp | Pulse2Chirp) | (Pulse1Chirp | Pulse2Chirp, ChirpBoth)
            )
    }
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.path())
    }
}

impl std::str::FromStr for SweepParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SweepParameter::ALL
            .into_iter()
            .find(|p| p.path() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown sweep parameter `{s}`")))
    }
}

/// Per-cell quantity reported by a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    #[default]
    FinalAbsRho21,
    FinalRho22,
    FinalRhoDd,
    MaxRho33,
}

impl Observable {
    pub fn extract(&self, obs: &FinalObservables) -> f64 {
        match self {
            Observable::FinalAbsRho21 => obs.abs_rho21,
            Observable::FinalRho22 => obs.rho22,
            Observable::FinalRhoDd => obs.rho_dd,
            Observable::MaxRho33 => obs.max_rho33,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub parameter: SweepParameter,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    /// Evenly spaced values from `min` to `max` inclusive; a single point sits
    /// at `min`.
    ///
    /// Each value is `min + (max - min) * (i / (count - 1))`, so refining the
    /// grid from n to 2n − 1 points reproduces the old values bit for bit.
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| self.min + (self.max - self.min) * (i as f64 / last))
            .collect()
    }

    fn validate(&self, label: &str) -> Result<()> {
        if self.count == 0 {
            return Err(Error::param(format!("{label}.count"), 0.0, "count >= 1"));
        }
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err(Error::InvalidConfig(format!("{label}: range must be finite")));
        }
        if !(self.min <= self.max) {
            return Err(Error::param(format!("{label}.min"), self.min, "min <= max"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub base: SimulationConfig,
    pub axis1: Axis,
    pub axis2: Axis,
    pub observable: Observable,
}

impl SweepSpec {
    /// Checks the axes and the base configuration. Configurations produced by
    /// individual axis values are checked per cell.
    pub fn validate(&self) -> Result<()> {
        self.axis1.validate("sweep.axis1")?;
        self.axis2.validate("sweep.axis2")?;
        if self.axis1.parameter.overlaps(&self.axis2.parameter) {
            return Err(Error::InvalidConfig(format!(
                "sweep axes `{}` and `{}` set the same parameter",
                self.axis1.parameter, self.axis2.parameter
            )));
        }
        self.base.validate()?;
        Ok(())
    }

    /// Configuration for grid cell (i, j).
    pub fn cell_config(&self, v1: f64, v2: f64) -> SimulationConfig {
        let mut cfg = self.base;
        self.axis1.parameter.apply(&mut cfg, v1);
        self.axis2.parameter.apply(&mut cfg, v2);
        cfg
    }
}

/// Result of one grid cell.
#[derive(Debug, Clone, PartialEq)]
pub enum CellOutcome {
    Ok {
        value: f64,
        /// Largest |Tr ρ − 1| over the cell's run.
        trace_error_max: f64,
    },
    Failed {
        reason: String,
        numerical: bool,
    },
}

impl CellOutcome {
    pub fn value(&self) -> Option<f64> {
        match self {
            CellOutcome::Ok { value, .. } => Some(*value),
            CellOutcome::Failed { .. } => None,
        }
    }

    pub fn is_ok(&self) -> bool {
        matches!(self, CellOutcome::Ok { .. })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    /// (axis1 index, axis2 index)
    pub index: (usize, usize),
    pub param1: f64,
    pub param2: f64,
    pub outcome: CellOutcome,
}

/// Solver settings shared by every cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverProvenance {
    pub dt: f64,
    pub t_start: f64,
    pub t_end: f64,
    pub variant: EquationVariant,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub spec: SweepSpec,
    /// Row-major by (axis1 index, axis2 index).
    pub cells: Vec<SweepCell>,
    pub provenance: SolverProvenance,
}

impl SweepResult {
    pub fn shape(&self) -> (usize, usize) {
        (self.spec.axis1.count, self.spec.axis2.count)
    }

    pub fn cell(&self, i: usize, j: usize) -> &SweepCell {
        &self.cells[i * self.spec.axis2.count + j]
    }

    pub fn failures(&self) -> usize {
        self.cells.iter().filter(|c| !c.outcome.is_ok()).count()
    }

    /// Largest observable over successful cells.
    pub fn max_value(&self) -> Option<f64> {
        self.cells
            .iter()
            .filter_map(|c| c.outcome.value())
            .reduce(f64::max)
    }

    /// Grid index whose coordinates are closest to (p1, p2), with distance
    /// measured in units of each axis' span.
    pub fn nearest_cell(&self, p1: f64, p2: f64) -> (usize, usize) {
        let scale = |a: &Axis| if a.max > a.min { a.max - a.min } else { 1.0 };
        let (s1, s2) = (scale(&self.spec.axis1), scale(&self.spec.axis2));
        self.cells
            .iter()
            .min_by(|a, b| {
                let da = ((a.param1 - p1) / s1).powi(2) + ((a.param2 - p2) / s2).powi(2);
                let db = ((b.param1 - p1) / s1).powi(2) + ((b.param2 - p2) / s2).powi(2);
                da.total_cmp(&db)
            })
            .map(|c| c.index)
            .expect("sweep grid is never empty")
    }
}

fn run_cell(spec: &SweepSpec, index: (usize, usize), param1: f64, param2: f64) -> SweepCell {
    let cfg = spec.cell_config(param1, param2);
    let outcome = match integrate(&cfg).and_then(|traj| {
        let obs = final_observables(&traj)?;
        Ok((spec.observable.extract(&obs), traj.max_trace_error()))
    }) {
        Ok((value, trace_error_max)) => CellOutcome::Ok {
            value,
            trace_error_max,
        },
        Err(e) => CellOutcome::Failed {
            numerical: e.is_numerical(),
            reason: e.to_string(),
        },
    };
    SweepCell {
        index,
        param1,
        param2,
        outcome,
    }
}

/// Runs every cell of the grid on `workers` threads (all available CPUs when
/// `None`). Cell failures are recorded in the result, not returned as errors.
pub fn run_sweep(spec: &SweepSpec, workers: Option<usize>) -> Result<SweepResult> {
    spec.validate()?;
    let v1 = spec.axis1.values();
    let v2 = spec.axis2.values();
    let jobs: Vec<((usize, usize), f64, f64)> = v1
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| v2.iter().enumerate().map(move |(j, &b)| ((i, j), a, b)))
        .collect();

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        if n == 0 {
            return Err(Error::param("workers", 0.0, "workers >= 1"));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::InvalidConfig(format!("cannot start worker pool: {e}")))?;
    let cells = pool.install(|| {
        jobs.par_iter()
            .map(|&(index, a, b)| run_cell(spec, index, a, b))
            .collect()
    });

    Ok(SweepResult {
        spec: *spec,
        cells,
        provenance: SolverProvenance {
            dt: spec.base.dt,
            t_start: spec.base.t_start,
            t_end: spec.base.t_end,
            variant: spec.base.variant,
        },
    })
}

/// A 4-connected set of grid cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    pub cells: Vec<(usize, usize)>,
    /// Inclusive index bounds along axis 1.
    pub rows: (usize, usize),
    /// Inclusive index bounds along axis 2.
    pub cols: (usize, usize),
    /// Parameter bounds along axis 1.
    pub param1_range: (f64, f64),
    /// Parameter bounds along axis 2.
    pub param2_range: (f64, f64),
}

impl Region {
    pub fn contains(&self, index: (usize, usize)) -> bool {
        self.cells.contains(&index)
    }

    /// Cells spanned along (axis 1, axis 2).
    pub fn extent(&self) -> (usize, usize) {
        (self.rows.1 - self.rows.0 + 1, self.cols.1 - self.cols.0 + 1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlateauSummary {
    pub threshold: f64,
    /// Successful cells with observable ≥ threshold.
    pub count: usize,
    pub fraction: f64,
    /// Largest connected above-threshold region, if any.
    pub largest: Option<Region>,
}

/// Connected components (4-neighbour) of cells at or above `threshold`,
/// largest first. Failed cells never qualify.
pub fn connected_regions(result: &SweepResult, threshold: f64) -> Vec<Region> {
    let (rows, cols) = result.shape();
    let above = |i: usize, j: usize| {
        result
            .cell(i, j)
            .outcome
            .value()
            .is_some_and(|v| v >= threshold)
    };
    let mut seen = vec![false; rows * cols];
    let mut regions = Vec::new();
    for start in 0..rows * cols {
        let (i0, j0) = (start / cols, start % cols);
        if seen[start] || !above(i0, j0) {
            continue;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([(i0, j0)]);
        let mut cells = Vec::new();
        while let Some((i, j)) = queue.pop_front() {
            cells.push((i, j));
            let neighbours = [
                (i.wrapping_sub(1), j),
                (i + 1, j),
                (i, j.wrapping_sub(1)),
                (i, j + 1),
            ];
            for (ni, nj) in neighbours {
                if ni < rows && nj < cols && !seen[ni * cols + nj] && above(ni, nj) {
                    seen[ni * cols + nj] = true;
                    queue.push_back((ni, nj));
                }
            }
        }
        cells.sort_unstable();
        regions.push(region_from_cells(result, cells));
    }
    regions.sort_by(|a, b| b.cells.len().cmp(&a.cells.len()));
    regions
}

fn region_from_cells(result: &SweepResult, cells: Vec<(usize, usize)>) -> Region {
    let rows = (
        cells.iter().map(|c| c.0).min().unwrap(),
        cells.iter().map(|c| c.0).max().unwrap(),
    );
    let cols = (
        cells.iter().map(|c| c.1).min().unwrap(),
        cells.iter().map(|c| c.1).max().unwrap(),
    );
    let v1 = result.spec.axis1.values();
    let v2 = result.spec.axis2.values();
    Region {
        param1_range: (v1[rows.0], v1[rows.1]),
        param2_range: (v2[cols.0], v2[cols.1]),
        cells,
        rows,
        cols,
    }
}

/// How much of the grid reaches `threshold`, and where.
pub fn plateau_summary(result: &SweepResult, threshold: f64) -> Result<PlateauSummary> {
    // thresholds above 1 are allowed and simply select nothing
    if !(threshold >= 0.0) {
        return Err(Error::param("threshold", threshold, "threshold >= 0"));
    }
    let count = result
        .cells
        .iter()
        .filter(|c| c.outcome.value().is_some_and(|v| v >= threshold))
        .count();
    Ok(PlateauSummary {
        threshold,
        count,
        fraction: count as f64 / result.cells.len() as f64,
        largest: connected_regions(result, threshold).into_iter().next(),
    })
}
