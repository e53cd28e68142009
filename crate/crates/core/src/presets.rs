//! Built-in configurations: the sodium-like Λ system driven by the pulse
//! pairs of the three reference scenarios.

use crate::dynamics::SimulationConfig;
use crate::pulse::ChirpedPulse;
use crate::sweep::{Axis, Observable, SweepParameter, SweepSpec};
use crate::system::LambdaSystem;

/// Gaussian width shared by both pulses, fs.
pub const PULSE_WIDTH: f64 = 4.49;

/// Two pulses on the sodium-like system with resonant carriers.
pub fn sodium(peak_rabi1: f64, peak_rabi2: f64, chirp1: f64, chirp2: f64) -> SimulationConfig {
    let system = LambdaSystem::SODIUM;
    let pulse1 = ChirpedPulse {
        peak_rabi: peak_rabi1,
        width: PULSE_WIDTH,
        carrier: system.omega31,
        chirp: chirp1,
    };
    let pulse2 = ChirpedPulse {
        peak_rabi: peak_rabi2,
        width: PULSE_WIDTH,
        carrier: system.omega32(),
        chirp: chirp2,
    };
    SimulationConfig::new(system, pulse1, pulse2)
}

/// Maximal lower-state coherence: Ω₁₀ = 1, Ω₂₀ = 2.4 rad/fs,
/// χ₁ = χ₂ = 0.397 fs⁻³.
pub fn figure2() -> SimulationConfig {
    sodium(1.0, 2.4, 0.397, 0.397)
}

/// Population transfer to |2⟩: Ω₁₀ = 1.67, Ω₂₀ = 2.5 rad/fs, χ₁ = 0.6,
/// χ₂ = 0.4 fs⁻³.
pub fn figure4() -> SimulationConfig {
    sodium(1.67, 2.5, 0.6, 0.4)
}

pub const FIGURE3_CHIRP_RANGE: (f64, f64) = (0.0, 0.794);
pub const FIGURE3_RABI2_RANGE: (f64, f64) = (0.8, 4.0);

/// Coherence robustness map over the common chirp and Ω₂₀, with Ω₁₀ = 1 rad/fs
/// held fixed. `resolution` points per axis.
pub fn figure3(resolution: usize) -> SweepSpec {
    SweepSpec {
        base: figure2(),
        axis1: Axis {
            parameter: SweepParameter::ChirpBoth,
            min: FIGURE3_CHIRP_RANGE.0,
            max: FIGURE3_CHIRP_RANGE.1,
            count: resolution,
        },
        axis2: Axis {
            parameter: SweepParameter::Pulse2PeakRabi,
            min: FIGURE3_RABI2_RANGE.0,
            max: FIGURE3_RABI2_RANGE.1,
            count: resolution,
        },
        observable: Observable::FinalAbsRho21,
    }
}
