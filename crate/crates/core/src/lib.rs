//! Coherent dynamics of a three-level Λ atom driven by two few-cycle pulses
//! with cubic chirp, integrated without the rotating-wave approximation.
//!
//! The crate is organized bottom-up:
//!
//! - [`pulse`], [`system`], [`state`], [`units`]: fields, level structure,
//!   density matrices and the dark/bright projection.
//! - [`dynamics`]: the Bloch equations and the fixed-step RK4 integrator.
//! - [`oracle`]: an independent pure-state propagator for cross-checks.
//! - [`sweep`]: parallel two-parameter grid scans.
//! - [`presets`]: the built-in sodium-like scenarios.

pub mod dynamics;
pub mod error;
pub mod oracle;
pub mod presets;
pub mod pulse;
pub mod state;
pub mod sweep;
pub mod system;
pub mod trajectory;
pub mod units;

pub use dynamics::{
    bloch_rhs, integrate, propagate, rk4_step, Diagnostic, EquationVariant, SimulationConfig,
};
pub use error::{Error, Result};
pub use oracle::schrodinger_oracle;
pub use pulse::ChirpedPulse;
pub use state::{dark_bright_populations, DensityMatrix, DressedPopulations, MixingBasis};
pub use sweep::{
    connected_regions, plateau_summary, run_sweep, Axis, CellOutcome, Observable,
    PlateauSummary, Region, SolverProvenance, SweepCell, SweepParameter, SweepResult, SweepSpec,
};
pub use system::LambdaSystem;
pub use trajectory::{final_observables, FinalObservables, Sample, Trajectory};
pub use units::{field_from_rabi, rabi_from_field};

/// Crate version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
