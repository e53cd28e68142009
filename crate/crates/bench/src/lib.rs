//! Benchmark fixtures. The benchmarks themselves live in `benches/`.

use lambdachirp::{presets, SimulationConfig, SweepSpec};

/// The maximal-coherence scenario on a shortened window, so one iteration
/// stays in the millisecond range.
pub fn short_run() -> SimulationConfig {
    let mut cfg = presets::figure2();
    cfg.t_start = -5.0;
    cfg.t_end = 5.0;
    cfg
}

/// A 3×3 robustness grid on the shortened window.
pub fn small_sweep() -> SweepSpec {
    let mut spec = presets::figure3(3);
    spec.base = short_run();
    spec
}
