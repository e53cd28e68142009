//! Density-matrix equations of motion without the rotating-wave
//! approximation, and their fixed-step RK4 integration.

use std::fmt;

use nalgebra::Matrix3;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pulse::ChirpedPulse;
use crate::state::{DensityMatrix, MixingBasis};
use crate::system::LambdaSystem;
use crate::trajectory::{Sample, Trajectory};

pub const DEFAULT_DT: f64 = 5e-4;
pub const DEFAULT_RECORD_STRIDE: usize = 20;
/// Default half-window in units of the pulse width.
pub const DEFAULT_HALF_WINDOW_WIDTHS: f64 = 5.0;
/// Largest acceptable carrier phase advance per step, rad.
pub const MAX_PHASE_PER_STEP: f64 = 0.2;
/// Envelope level (relative to peak) below which a field counts as off when
/// checking step resolution.
pub const RESOLUTION_ENVELOPE_FLOOR: f64 = 1e-4;
/// Any |ρ_ij| above this aborts the run.
pub const BLOWUP_BOUND: f64 = 2.0;

/// Which form of the ρ₃₂ equation to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EquationVariant {
    /// −i[H, ρ]; the ρ̇₃₂ inversion term is (ρ₃₃ − ρ₂₂).
    #[default]
    Derived,
    /// The printed equation set, whose ρ̇₃₂ inversion term is (ρ₃₃ − ρ₁₁).
    /// Not trace-of-ρ² preserving.
    #[serde(alias = "paper-literal")]
    PaperLiteral,
}

impl EquationVariant {
    pub fn as_str(&self) -> &'static str {
        match self {
            EquationVariant::Derived => "derived",
            EquationVariant::PaperLiteral => "paper_literal",
        }
    }
}

impl fmt::Display for EquationVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for EquationVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "derived" => Ok(EquationVariant::Derived),
            "paper_literal" | "paper-literal" => Ok(EquationVariant::PaperLiteral),
            other => Err(Error::InvalidConfig(format!(
                "unknown equation variant `{other}` (expected derived or paper-literal)"
            ))),
        }
    }
}

/// Non-fatal problems found while validating a configuration.
#[derive(Debug, Clone, PartialEq)]
pub enum Diagnostic {
    /// dt times the fastest instantaneous frequency of a pulse, over the part
    /// of the window where that pulse is on, exceeds [`MAX_PHASE_PER_STEP`].
    UnderResolvedStep { pulse: usize, phase_per_step: f64 },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::UnderResolvedStep {
                pulse,
                phase_per_step,
            } => write!(
                f,
                "pulse{pulse}: phase advance per step {phase_per_step:.3} rad exceeds {MAX_PHASE_PER_STEP} rad; reduce dt"
            ),
        }
    }
}

/// Everything needed for one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationConfig {
    pub system: LambdaSystem,
    /// Couples |3⟩ ↔ |1⟩.
    pub pulse1: ChirpedPulse,
    /// Couples |3⟩ ↔ |2⟩.
    pub pulse2: ChirpedPulse,
    pub t_start: f64,
    pub t_end: f64,
    pub dt: f64,
    pub record_stride: usize,
    pub initial_state: DensityMatrix,
    pub variant: EquationVariant,
    /// Basis for the dark/bright populations in recorded samples.
    pub basis: MixingBasis,
}

impl SimulationConfig {
    /// Default numerics around two pulses: window ±5 widths of the wider
    /// pulse, dt = 5e-4 fs, every 20th step recorded, all population in |1⟩.
    pub fn new(system: LambdaSystem, pulse1: ChirpedPulse, pulse2: ChirpedPulse) -> Self {
        let half = DEFAULT_HALF_WINDOW_WIDTHS * pulse1.width.max(pulse2.width);
        SimulationConfig {
            system,
            pulse1,
            pulse2,
            t_start: -half,
            t_end: half,
            dt: DEFAULT_DT,
            record_stride: DEFAULT_RECORD_STRIDE,
            initial_state: DensityMatrix::basis_state(1).expect("level 1 exists"),
            variant: EquationVariant::Derived,
            basis: MixingBasis::EQUAL,
        }
    }

    /// Checks all invariants. Returns the non-fatal diagnostics on success.
    pub fn validate(&self) -> Result<Vec<Diagnostic>> {
        self.system.validate()?;
        self.pulse1.validate("pulse1")?;
        self.pulse2.validate("pulse2")?;
        self.basis.validate()?;
        self.initial_state.validate()?;
        if !(self.t_start.is_finite() && self.t_end.is_finite()) {
            return Err(Error::InvalidConfig("time window must be finite".into()));
        }
        if !(self.t_start < self.t_end) {
            return Err(Error::param("solver.t_start", self.t_start, "t_start < t_end"));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::param("solver.dt", self.dt, "dt > 0"));
        }
        if !(self.dt < self.t_end - self.t_start) {
            return Err(Error::param("solver.dt", self.dt, "dt < t_end - t_start"));
        }
        if self.record_stride == 0 {
            return Err(Error::param("solver.record_stride", 0.0, "record_stride >= 1"));
        }
        Ok(self.resolution_diagnostics())
    }

    fn resolution_diagnostics(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        for (index, pulse) in [(1, &self.pulse1), (2, &self.pulse2)] {
            if pulse.peak_rabi == 0.0 {
                continue;
            }
            let on = pulse.envelope_half_width(RESOLUTION_ENVELOPE_FLOOR);
            let lo = self.t_start.max(-on);
            let hi = self.t_end.min(on);
            if lo > hi {
                continue;
            }
            let phase_per_step = self.dt * pulse.max_abs_frequency(lo, hi);
            if phase_per_step > MAX_PHASE_PER_STEP {
                out.push(Diagnostic::UnderResolvedStep {
                    pulse: index,
                    phase_per_step,
                });
            }
        }
        out
    }

    /// The interaction Rabi frequencies (Ω₃₁(t), Ω₃₂(t)).
    #[inline]
    pub fn rabi(&self, t: f64) -> (f64, f64) {
        (self.pulse1.rabi(t), self.pulse2.rabi(t))
    }

    /// Ĥ(t)/ħ in the {|1⟩, |2⟩, |3⟩} basis.
    pub fn hamiltonian(&self, t: f64) -> Matrix3<C64> {
        let [e1, e2, e3] = self.system.energies();
        let (o31, o32) = self.rabi(t);
        let r = |x: f64| C64::new(x, 0.0);
        Matrix3::new(
            r(e1), r(0.0), r(-o31),
            r(0.0), r(e2), r(-o32),
            r(-o31), r(-o32), r(e3),
        )
    }

    pub(crate) fn step_plan(&self) -> StepPlan {
        StepPlan::new(self.t_start, self.t_end, self.dt)
    }
}

/// dρ/dt at time `t`.
pub fn bloch_rhs(t: f64, rho: &Matrix3<C64>, config: &SimulationConfig) -> Matrix3<C64> {
    match config.variant {
        EquationVariant::Derived => commutator_rhs(t, rho, config),
        EquationVariant::PaperLiteral => printed_rhs(t, rho, config),
    }
}

fn commutator_rhs(t: f64, rho: &Matrix3<C64>, config: &SimulationConfig) -> Matrix3<C64> {
    let h = config.hamiltonian(t);
    (h * rho - rho * h) * C64::new(0.0, -1.0)
}

/// The six printed equations, element by element, with the lower-triangle
/// partners filled by conjugation.
fn printed_rhs(t: f64, rho: &Matrix3<C64>, config: &SimulationConfig) -> Matrix3<C64> {
    let (o31, o32) = config.rabi(t);
    let s = &config.system;
    let i = C64::i();
    let r = |a: usize, b: usize| rho[(a - 1, b - 1)];

    let d31 = -i * s.omega31 * r(3, 1) + i * o32 * r(2, 1) - i * o31 * (r(3, 3) - r(1, 1));
    let d32 = -i * s.omega32() * r(3, 2) + i * o31 * r(1, 2) - i * o32 * (r(3, 3) - r(1, 1));
    let d21 = -i * s.omega21 * r(2, 1) + i * o32 * r(3, 1) - i * o31 * r(2, 3);
    let d11 = i * o31 * (r(3, 1) - r(1, 3));
    let d22 = i * o32 * (r(3, 2) - r(2, 3));
    let d33 = i * o31 * (r(1, 3) - r(3, 1)) + i * o32 * (r(2, 3) - r(3, 2));

    Matrix3::new(
        d11, d21.conj(), d31.conj(),
        d21, d22, d32.conj(),
        d31, d32, d33,
    )
}

/// One classic RK4 step from `t` to `t + dt` (dt may be negative), with
/// fields evaluated exactly at the stage times. The result is re-Hermitized.
pub fn rk4_step(t: f64, rho: &DensityMatrix, dt: f64, config: &SimulationConfig) -> DensityMatrix {
    let y = rho.matrix();
    let half = C64::new(0.5 * dt, 0.0);
    let full = C64::new(dt, 0.0);
    let k1 = bloch_rhs(t, y, config);
    let k2 = bloch_rhs(t + 0.5 * dt, &(y + k1 * half), config);
    let k3 = bloch_rhs(t + 0.5 * dt, &(y + k2 * half), config);
    let k4 = bloch_rhs(t + dt, &(y + k3 * full), config);
    let next = y + (k1 + (k2 + k3) * C64::new(2.0, 0.0) + k4) * C64::new(dt / 6.0, 0.0);
    DensityMatrix::from_matrix_unchecked(next).hermitized()
}

/// Step times for a fixed-step march from `t0` to `t1`. All steps have length
/// `dt` except a shorter last one when the span is not a whole number of
/// steps.
#[derive(Debug, Clone, Copy)]
pub(crate) struct StepPlan {
    t0: f64,
    t1: f64,
    dt: f64,
    pub(crate) n_steps: usize,
}

impl StepPlan {
    /// `dt_magnitude` is positive; the sign is taken from the direction.
    pub(crate) fn new(t0: f64, t1: f64, dt_magnitude: f64) -> Self {
        let span = (t1 - t0).abs();
        let ratio = span / dt_magnitude;
        let nearest = ratio.round();
        let n_steps = if (ratio - nearest).abs() <= 1e-9 * nearest.max(1.0) {
            nearest as usize
        } else {
            ratio.ceil() as usize
        }
        .max(1);
        StepPlan {
            t0,
            t1,
            dt: dt_magnitude.copysign(t1 - t0),
            n_steps,
        }
    }

    /// Time at the start of step `k`; `time(n_steps)` is exactly `t1`.
    #[inline]
    pub(crate) fn time(&self, k: usize) -> f64 {
        if k >= self.n_steps {
            self.t1
        } else {
            self.t0 + k as f64 * self.dt
        }
    }

    /// Signed length of step `k`.
    #[inline]
    pub(crate) fn step(&self, k: usize) -> f64 {
        if k + 1 == self.n_steps {
            self.t1 - self.time(k)
        } else {
            self.dt
        }
    }

    /// Whether the state after `completed` steps is recorded.
    #[inline]
    pub(crate) fn records(&self, completed: usize, stride: usize) -> bool {
        completed % stride == 0 || completed == self.n_steps
    }
}

fn check_blowup(t: f64, rho: &DensityMatrix) -> Result<()> {
    let magnitude = rho.max_abs();
    if magnitude > BLOWUP_BOUND || !magnitude.is_finite() {
        return Err(Error::NumericalBlowup { t, magnitude });
    }
    Ok(())
}

/// Marches `config.initial_state` from `t_start` to `t_end`.
pub fn integrate(config: &SimulationConfig) -> Result<Trajectory> {
    config.validate()?;
    let plan = config.step_plan();
    let stride = config.record_stride;
    let mut samples = Vec::with_capacity(plan.n_steps / stride + 2);
    let mut rho = config.initial_state;
    samples.push(Sample::new(plan.time(0), rho, &config.basis));
    for k in 0..plan.n_steps {
        let t = plan.time(k);
        rho = rk4_step(t, &rho, plan.step(k), config);
        let t_next = plan.time(k + 1);
        check_blowup(t_next, &rho)?;
        if plan.records(k + 1, stride) {
            samples.push(Sample::new(t_next, rho, &config.basis));
        }
    }
    Ok(Trajectory { samples })
}

/// Propagates `rho` from `t_from` to `t_to` (either direction) with step
/// magnitude `config.dt`, returning only the final state.
pub fn propagate(
    config: &SimulationConfig,
    rho: &DensityMatrix,
    t_from: f64,
    t_to: f64,
) -> Result<DensityMatrix> {
    if !(config.dt > 0.0) {
        return Err(Error::param("solver.dt", config.dt, "dt > 0"));
    }
    let plan = StepPlan::new(t_from, t_to, config.dt);
    let mut rho = *rho;
    for k in 0..plan.n_steps {
        rho = rk4_step(plan.time(k), &rho, plan.step(k), config);
        check_blowup(plan.time(k + 1), &rho)?;
    }
    Ok(rho)
}
