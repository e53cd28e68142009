//! End-to-end acceptance criteria. Prints one PASS/FAIL line per criterion
//! and exits non-zero if any fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use lambdachirp::{
    connected_regions, final_observables, integrate, plateau_summary, presets, run_sweep,
    schrodinger_oracle, EquationVariant, MixingBasis, SimulationConfig, Trajectory,
};

// Figure-read tolerances.
const COHERENCE_TARGET: f64 = 0.5;
const COHERENCE_TOL: f64 = 0.05;
const EXCITED_MAX: f64 = 0.05;
const DARK_MIN: f64 = 0.9;
const BRIGHT_MAX: f64 = 0.1;
const TRANSFER_MIN: f64 = 0.85;
const PLATEAU_THRESHOLD: f64 = 0.45;
const SWEEP_RESOLUTION: usize = 25;
const SWEEP_WORKERS: usize = 4;

// Numerical tolerances.
const TRACE_TOL: f64 = 1e-9;
const HERMITICITY_TOL: f64 = 1e-12;
const PURITY_TOL: f64 = 1e-6;
const ORACLE_TOL: f64 = 1e-6;
const SLOPE_RANGE: (f64, f64) = (3.5, 4.5);
const CONVERGENCE_STEPS: [f64; 4] = [4e-3, 2e-3, 1e-3, 5e-4];
const CONVERGENCE_REFERENCE_STEP: f64 = 6.25e-5;

const SINGLE_RUN_BUDGET: Duration = Duration::from_secs(5);
const SWEEP_BUDGET: Duration = Duration::from_secs(300);

/// Cells at or above 0.45 on the 25×25 built-in grid, from the first
/// verified run.
const PLATEAU_BASELINE_CELLS: usize = 213;

struct Report {
    failures: Vec<&'static str>,
}

impl Report {
    fn criterion(&mut self, id: &'static str, passed: bool, detail: String) {
        println!("[{}] {id}: {detail}", if passed { "PASS" } else { "FAIL" });
        if !passed {
            self.failures.push(id);
        }
    }
}

fn within(x: f64, target: f64, tol: f64) -> bool {
    (x - target).abs() <= tol
}

fn max_element_gap(a: &Trajectory, b: &Trajectory) -> f64 {
    assert_eq!(a.len(), b.len());
    a.samples
        .iter()
        .zip(&b.samples)
        .map(|(x, y)| {
            assert_eq!(x.t, y.t);
            (x.rho.matrix() - y.rho.matrix())
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

fn timed(cfg: &SimulationConfig) -> (Trajectory, Duration) {
    let start = Instant::now();
    let traj = integrate(cfg).expect("integration succeeds");
    (traj, start.elapsed())
}

/// Least-squares slope of log(err) against log(dt).
fn loglog_slope(dts: &[f64], errs: &[f64]) -> f64 {
    let xs: Vec<f64> = dts.iter().map(|d| d.ln()).collect();
    let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

fn main() {
    let mut report = Report { failures: vec![] };

    // 1. maximal coherence endpoint
    let fig2 = presets::figure2();
    let (traj2, t2) = timed(&fig2);
    let f2 = final_observables(&traj2).unwrap();
    report.criterion(
        "C1 coherence endpoint",
        within(f2.abs_rho21, COHERENCE_TARGET, COHERENCE_TOL)
            && f2.rho33 <= EXCITED_MAX
            && within(f2.rho11, 0.5, COHERENCE_TOL)
            && within(f2.rho22, 0.5, COHERENCE_TOL)
            && t2 < SINGLE_RUN_BUDGET,
        format!(
            "|rho21| = {:.6}, rho11 = {:.6}, rho22 = {:.6}, rho33 = {:.6}, runtime {:.3} s",
            f2.abs_rho21,
            f2.rho11,
            f2.rho22,
            f2.rho33,
            t2.as_secs_f64()
        ),
    );

    // 2. dark-state trapping in the equal-superposition basis
    let last = traj2.last().unwrap();
    let alt = MixingBasis::from_peak_rabi(fig2.pulse1.peak_rabi, fig2.pulse2.peak_rabi).unwrap();
    let alt_pops = lambdachirp::dark_bright_populations(&last.rho, &alt);
    let start_pops = traj2.samples[0].dressed;
    report.criterion(
        "C2 dark-state trapping",
        last.dressed.dark >= DARK_MIN && last.dressed.bright <= BRIGHT_MAX,
        format!(
            "theta = pi/4: rho_DD {:.4} -> {:.6}, rho_BB {:.4} -> {:.6}; (theta = atan(O10/O20): rho_DD = {:.4})",
            start_pops.dark, last.dressed.dark, start_pops.bright, last.dressed.bright, alt_pops.dark
        ),
    );

    // 3. population transfer
    let fig4 = presets::figure4();
    let (traj4, _) = timed(&fig4);
    let f4 = final_observables(&traj4).unwrap();
    report.criterion(
        "C3 population transfer",
        f4.rho22 >= TRANSFER_MIN && f4.rho22 > f4.rho11 && f4.rho22 > f4.rho33,
        format!(
            "rho11 = {:.6}, rho22 = {:.6}, rho33 = {:.6}",
            f4.rho11, f4.rho22, f4.rho33
        ),
    );

    // 4. robustness map
    let spec = presets::figure3(SWEEP_RESOLUTION);
    let start = Instant::now();
    let sweep = run_sweep(&spec, Some(SWEEP_WORKERS)).unwrap();
    let sweep_time = start.elapsed();
    let max = sweep.max_value().unwrap_or(f64::NAN);
    let centre = sweep.nearest_cell(0.397, 2.4);
    let plateau = plateau_summary(&sweep, PLATEAU_THRESHOLD).unwrap();
    let region = connected_regions(&sweep, PLATEAU_THRESHOLD)
        .into_iter()
        .find(|r| r.contains(centre));
    let extent = region.as_ref().map(|r| r.extent()).unwrap_or((0, 0));
    report.criterion(
        "C4 robustness plateau",
        sweep.failures() == 0
            && within(max, COHERENCE_TARGET, COHERENCE_TOL)
            && extent.0 > 1
            && extent.1 > 1
            && plateau.count == PLATEAU_BASELINE_CELLS
            && sweep_time < SWEEP_BUDGET,
        format!(
            "{}x{} grid, max {:.6}, centre cell {:?} = {:.6}, region extent {:?} ({} cells, chirp {:?}, O20 {:?}), \
             {} cells >= {PLATEAU_THRESHOLD} (fraction {:.4}, baseline {PLATEAU_BASELINE_CELLS}), {:.1} s",
            SWEEP_RESOLUTION,
            SWEEP_RESOLUTION,
            max,
            centre,
            sweep.cell(centre.0, centre.1).outcome.value().unwrap_or(f64::NAN),
            extent,
            region.as_ref().map_or(0, |r| r.cells.len()),
            region.as_ref().map(|r| r.param1_range),
            region.as_ref().map(|r| r.param2_range),
            plateau.count,
            plateau.fraction,
            sweep_time.as_secs_f64()
        ),
    );

    // 5. conservation over the criterion 1-3 runs
    let runs = [&traj2, &traj4];
    let trace = runs.iter().map(|t| t.max_trace_error()).fold(0.0, f64::max);
    let herm = runs.iter().map(|t| t.max_hermiticity_error()).fold(0.0, f64::max);
    let purity = runs.iter().map(|t| t.max_purity_deviation()).fold(0.0, f64::max);
    report.criterion(
        "C5 conservation",
        trace <= TRACE_TOL && herm <= HERMITICITY_TOL && purity <= PURITY_TOL,
        format!("max |Tr rho - 1| = {trace:.2e}, max |rho - rho^H| = {herm:.2e}, max |Tr rho^2 - 1| = {purity:.2e}"),
    );

    // 6. oracle equivalence
    let oracle = schrodinger_oracle(&fig2).unwrap();
    let gap = max_element_gap(&traj2, &oracle);
    report.criterion(
        "C6 oracle equivalence",
        gap <= ORACLE_TOL,
        format!("max |rho_ij - oracle_ij| = {gap:.3e} over {} samples", oracle.len()),
    );

    // 7. global convergence order
    let final_abs21 = |dt: f64| {
        let cfg = SimulationConfig { dt, ..fig2 };
        integrate(&cfg).unwrap().last().unwrap().rho.get(2, 1).norm()
    };
    let reference = final_abs21(CONVERGENCE_REFERENCE_STEP);
    let errs: Vec<f64> = CONVERGENCE_STEPS
        .iter()
        .map(|&dt| (final_abs21(dt) - reference).abs())
        .collect();
    let slope = loglog_slope(&CONVERGENCE_STEPS, &errs);
    report.criterion(
        "C7 convergence order",
        (SLOPE_RANGE.0..=SLOPE_RANGE.1).contains(&slope),
        format!(
            "slope {slope:.4}; errors {}",
            errs.iter().map(|e| format!("{e:.3e}")).collect::<Vec<_>>().join(", ")
        ),
    );

    // 8. equation-variant discrepancy (reported, no threshold)
    let literal = SimulationConfig {
        variant: EquationVariant::PaperLiteral,
        ..fig2
    };
    let fl = final_observables(&integrate(&literal).unwrap()).unwrap();
    let diff = (fl.abs_rho21 - f2.abs_rho21).abs();
    report.criterion(
        "C8 variant discrepancy",
        diff.is_finite(),
        format!(
            "| |rho21|_derived - |rho21|_paper_literal | = {diff:.6} (paper_literal: |rho21| = {:.6}, rho11 = {:.4}, rho22 = {:.4}, rho33 = {:.4})",
            fl.abs_rho21, fl.rho11, fl.rho22, fl.rho33
        ),
    );

    // 9. determinism of the CLI output
    let bin = env!("CARGO_BIN_EXE_lambdachirp");
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let mut outputs = Vec::new();
    let mut statuses = Vec::new();
    for dir in &dirs {
        let status = Command::new(bin)
            .args(["reproduce", "--figure", "2", "--out"])
            .arg(dir.path())
            .status()
            .expect("binary runs");
        statuses.push(status.code());
        outputs.push(std::fs::read(Path::new(dir.path()).join("figure2.csv")).unwrap_or_default());
    }
    report.criterion(
        "C9 deterministic output",
        statuses.iter().all(|s| *s == Some(0)) && !outputs[0].is_empty() && outputs[0] == outputs[1],
        format!(
            "exit codes {:?}, {} bytes each, identical: {}",
            statuses,
            outputs[0].len(),
            outputs[0] == outputs[1]
        ),
    );

    if report.failures.is_empty() {
        println!("acceptance: all criteria passed");
    } else {
        println!("acceptance: failed {:?}", report.failures);
        std::process::exit(1);
    }
}
