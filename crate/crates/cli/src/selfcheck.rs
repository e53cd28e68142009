//! Invariant and oracle checks bundled into the `check` command.

use std::f64::consts::FRAC_PI_2;

use lambdachirp::{
    dark_bright_populations, final_observables, integrate, presets, propagate, rk4_step,
    schrodinger_oracle, DensityMatrix, MixingBasis, Result, SimulationConfig, Trajectory,
};

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        CheckResult {
            name,
            passed,
            detail,
        }
    }
}

fn max_element_gap(a: &Trajectory, b: &Trajectory) -> f64 {
    a.samples
        .iter()
        .zip(&b.samples)
        .map(|(x, y)| {
            let d = x.rho.matrix() - y.rho.matrix();
            d.iter().map(|z| z.norm()).fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

/// Small deterministic set of valid mixed states.
fn sample_states() -> Vec<DensityMatrix> {
    let mut seed: u64 = 0x9e37_79b9_7f4a_7c15;
    let mut next = move || {
        seed ^= seed << 13;
        seed ^= seed >> 7;
        seed ^= seed << 17;
        (seed >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    };
    (0..16)
        .map(|_| {
            let a = [[0; 3]; 3].map(|row| row.map(|_: i32| (next(), next())));
            // ρ = AA†/Tr(AA†)
            let mut re = [[0.0; 3]; 3];
            let mut im = [[0.0; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    for k in 0..3 {
                        let (ar, ai) = a[i][k];
                        let (br, bi) = a[j][k];
                        re[i][j] += ar * br + ai * bi;
                        im[i][j] += ai * br - ar * bi;
                    }
                }
            }
            let tr = re[0][0] + re[1][1] + re[2][2];
            let re = re.map(|r| r.map(|x| x / tr));
            let im = im.map(|r| r.map(|x| x / tr));
            DensityMatrix::from_parts(re, im).expect("AA† is a valid state")
        })
        .collect()
}

fn check_dressed_conservation() -> CheckResult {
    let mut worst = 0.0f64;
    for (k, rho) in sample_states().iter().enumerate() {
        let theta = FRAC_PI_2 * k as f64 / 15.0;
        let d = dark_bright_populations(rho, &MixingBasis::new(theta).unwrap());
        let gap = d.bright + d.dark - rho.population(1) - rho.population(2);
        worst = worst.max(gap.abs());
    }
    CheckResult::new(
        "dark+bright conserves lower populations",
        worst <= 1e-12,
        format!("max deviation {worst:.2e}"),
    )
}

fn check_free_evolution() -> Result<CheckResult> {
    let mut cfg = presets::figure2();
    cfg.pulse1.peak_rabi = 0.0;
    cfg.pulse2.peak_rabi = 0.0;
    cfg.system.omega21 = 0.1;
    cfg.t_start = 0.0;
    cfg.t_end = 1.0;
    cfg.dt = 0.001;
    cfg.record_stride = 1000;
    let mut re = [[0.0; 3]; 3];
    re[0][0] = 0.5;
    re[1][1] = 0.5;
    re[0][1] = 0.5;
    re[1][0] = 0.5;
    cfg.initial_state = DensityMatrix::from_parts(re, [[0.0; 3]; 3])?;
    let traj = integrate(&cfg)?;
    let got = traj.last().unwrap().rho.get(2, 1);
    let expected = lambdachirp::state::Complex64::from_polar(0.5, -0.1);
    let err = (got - expected).norm();
    Ok(CheckResult::new(
        "free coherence follows exp(-i w21 t)",
        err <= 1e-10,
        format!("error {err:.2e}"),
    ))
}

fn check_local_order() -> CheckResult {
    let cfg = presets::figure2();
    let rho0 = DensityMatrix::basis_state(1).unwrap();
    let discrepancy = |h: f64| {
        let one = rk4_step(0.0, &rho0, h, &cfg);
        let half = rk4_step(0.0, &rho0, h / 2.0, &cfg);
        let two = rk4_step(h / 2.0, &half, h / 2.0, &cfg);
        let d = one.matrix() - two.matrix();
        d.iter().map(|z| z.norm()).fold(0.0, f64::max)
    };
    let ratio = discrepancy(0.02) / discrepancy(0.01);
    CheckResult::new(
        "RK4 local error ratio ~ 32",
        (ratio - 32.0).abs() < 3.0,
        format!("ratio {ratio:.2}"),
    )
}

fn check_conservation(name: &'static str, cfg: &SimulationConfig) -> Result<CheckResult> {
    let traj = integrate(cfg)?;
    let trace = traj.max_trace_error();
    let herm = traj.max_hermiticity_error();
    let purity = traj.max_purity_deviation();
    let pops = traj.max_population_excursion();
    Ok(CheckResult::new(
        name,
        trace <= 1e-9 && herm <= 1e-12 && purity <= 1e-6 && pops <= 1e-9,
        format!(
            "trace {trace:.1e}, hermiticity {herm:.1e}, purity {purity:.1e}, population excursion {pops:.1e}"
        ),
    ))
}

fn check_oracle() -> Result<CheckResult> {
    let cfg = presets::figure2();
    let gap = max_element_gap(&integrate(&cfg)?, &schrodinger_oracle(&cfg)?);
    Ok(CheckResult::new(
        "density matrix matches Schrodinger oracle",
        gap <= 1e-6,
        format!("max |drho| {gap:.2e}"),
    ))
}

fn check_time_reversal() -> Result<CheckResult> {
    let cfg = presets::figure2();
    let rho0 = cfg.initial_state;
    let forward = propagate(&cfg, &rho0, cfg.t_start, cfg.t_end)?;
    let back = propagate(&cfg, &forward, cfg.t_end, cfg.t_start)?;
    let d = back.matrix() - rho0.matrix();
    let gap = d.iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(CheckResult::new(
        "forward then backward returns the initial state",
        gap <= 1e-6,
        format!("max |drho| {gap:.2e}"),
    ))
}

fn check_endpoints() -> Result<Vec<CheckResult>> {
    let f2 = final_observables(&integrate(&presets::figure2())?)?;
    let f4 = final_observables(&integrate(&presets::figure4())?)?;
    Ok(vec![
        CheckResult::new(
            "maximal-coherence scenario endpoint",
            (f2.abs_rho21 - 0.5).abs() <= 0.05
                && f2.rho33 <= 0.05
                && (f2.rho11 - 0.5).abs() <= 0.05
                && (f2.rho22 - 0.5).abs() <= 0.05
                && f2.rho_dd >= 0.9,
            format!(
                "|rho21| {:.4}, rho11 {:.4}, rho22 {:.4}, rho33 {:.4}, rho_DD {:.4}",
                f2.abs_rho21, f2.rho11, f2.rho22, f2.rho33, f2.rho_dd
            ),
        ),
        CheckResult::new(
            "population-transfer scenario endpoint",
            f4.rho22 >= 0.85 && f4.rho22 > f4.rho11 && f4.rho22 > f4.rho33,
            format!(
                "rho11 {:.4}, rho22 {:.4}, rho33 {:.4}",
                f4.rho11, f4.rho22, f4.rho33
            ),
        ),
    ])
}

/// Runs every check. Each takes well under a second in an optimized build.
pub fn run_checks() -> Vec<CheckResult> {
    let mut out = vec![check_dressed_conservation(), check_local_order()];
    let fallible: Vec<Result<Vec<CheckResult>>> = vec![
        check_free_evolution().map(|c| vec![c]),
        check_conservation("conservation (maximal coherence)", &presets::figure2()).map(|c| vec![c]),
        check_conservation("conservation (population transfer)", &presets::figure4()).map(|c| vec![c]),
        check_oracle().map(|c| vec![c]),
        check_time_reversal().map(|c| vec![c]),
        check_endpoints(),
    ];
    for r in fallible {
        match r {
            Ok(mut v) => out.append(&mut v),
            Err(e) => out.push(CheckResult::new("run", false, e.to_string())),
        }
    }
    out
}
