//! TOML configuration documents.
//!
//! Every key is optional; anything left out takes the sodium-like default
//! (ω₃₁ = 3.18 rad/fs, ω₂₁ = 1e-5 rad/fs, τ = 4.49 fs, carriers on
//! resonance, window ±5τ, dt = 5e-4 fs). Unknown keys are rejected.
//!
//! ```toml
//! [pulse1]            # couples |3> <-> |1>
//! peak_rabi = 1.0     # rad/fs
//! chirp = 0.397       # fs^-3
//!
//! [pulse2]            # couples |3> <-> |2>
//! peak_rabi = 2.4
//! chirp = 0.397
//!
//! [solver]
//! dt = 5e-4           # fs
//! variant = "derived" # or "paper_literal"
//!
//! [sweep]             # only for `sweep`
//! observable = "final_abs_rho21"
//! axis1 = { parameter = "chirp_both", min = 0.0, max = 0.794, count = 25 }
//! axis2 = { parameter = "pulse2.peak_rabi", min = 0.8, max = 4.0, count = 25 }
//! ```

use lambdachirp::dynamics::{DEFAULT_DT, DEFAULT_HALF_WINDOW_WIDTHS, DEFAULT_RECORD_STRIDE};
use lambdachirp::presets::PULSE_WIDTH;
use lambdachirp::state::{Complex64, StateVector};
use lambdachirp::{
    Axis, ChirpedPulse, DensityMatrix, EquationVariant, LambdaSystem, MixingBasis, Observable,
    SimulationConfig, SweepSpec,
};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<SystemSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pulse1: Option<PulseSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pulse2: Option<PulseSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<InitialSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<BasisSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    pub omega31: Option<f64>,
    pub omega21: Option<f64>,
    pub dipole31: Option<f64>,
    pub dipole32: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseSection {
    pub peak_rabi: Option<f64>,
    pub width: Option<f64>,
    pub carrier: Option<f64>,
    pub chirp: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub t_start: Option<f64>,
    pub t_end: Option<f64>,
    pub dt: Option<f64>,
    pub record_stride: Option<usize>,
    pub variant: Option<EquationVariant>,
}

/// At most one of the three forms may be given; the default is `level = 1`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSection {
    /// Pure basis state |level⟩.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
    /// Pure state amplitudes as [re, im] pairs; normalized on load.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<[[f64; 2]; 3]>,
    /// Full density matrix, real and imaginary parts by row.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_re: Option<[[f64; 3]; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_im: Option<[[f64; 3]; 3]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisConvention {
    /// θ = π/4
    Equal,
    /// θ = arctan(Ω₁₀/Ω₂₀)
    PeakRabi,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convention: Option<BasisConvention>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    #[serde(default)]
    pub observable: Observable,
    pub axis1: Axis,
    pub axis2: Axis,
}

/// A parsed document: a single run, or a sweep around a base run.
#[derive(Debug, Clone, PartialEq)]
pub enum ParsedConfig {
    Run(SimulationConfig),
    Sweep(SweepSpec),
}

pub fn parse_document(text: &str) -> Result<ConfigDocument, CliError> {
    toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
}

/// Parses and validates a document. A `[sweep]` section makes it a sweep.
pub fn parse_config(text: &str) -> Result<ParsedConfig, CliError> {
    parse_document(text)?.resolve()
}

/// Parses a single-run document; a `[sweep]` section is an error.
pub fn parse_run_config(text: &str) -> Result<SimulationConfig, CliError> {
    match parse_config(text)? {
        ParsedConfig::Run(cfg) => Ok(cfg),
        ParsedConfig::Sweep(_) => Err(CliError::Parse(
            "document has a [sweep] section; use the `sweep` command".into(),
        )),
    }
}

pub fn parse_sweep_spec(text: &str) -> Result<SweepSpec, CliError> {
    match parse_config(text)? {
        ParsedConfig::Sweep(spec) => Ok(spec),
        ParsedConfig::Run(_) => Err(CliError::Parse(
            "document has no [sweep] section".into(),
        )),
    }
}

impl ConfigDocument {
    pub fn resolve(&self) -> Result<ParsedConfig, CliError> {
        let base = self.resolve_run()?;
        match &self.sweep {
            None => Ok(ParsedConfig::Run(base)),
            Some(s) => {
                let spec = SweepSpec {
                    base,
                    axis1: s.axis1,
                    axis2: s.axis2,
                    observable: s.observable,
                };
                spec.validate()?;
                Ok(ParsedConfig::Sweep(spec))
            }
        }
    }

    fn resolve_run(&self) -> Result<SimulationConfig, CliError> {
        let sys = self.system.clone().unwrap_or_default();
        let na = LambdaSystem::SODIUM;
        let system = LambdaSystem {
            omega31: sys.omega31.unwrap_or(na.omega31),
            omega21: sys.omega21.unwrap_or(na.omega21),
            dipole31: sys.dipole31.unwrap_or(na.dipole31),
            dipole32: sys.dipole32.unwrap_or(na.dipole32),
        };
        system.validate()?;

        let pulse = |section: &Option<PulseSection>, resonance: f64| {
            let p = section.clone().unwrap_or_default();
            ChirpedPulse {
                peak_rabi: p.peak_rabi.unwrap_or(0.0),
                width: p.width.unwrap_or(PULSE_WIDTH),
                carrier: p.carrier.unwrap_or(resonance),
                chirp: p.chirp.unwrap_or(0.0),
            }
        };
        let pulse1 = pulse(&self.pulse1, system.omega31);
        let pulse2 = pulse(&self.pulse2, system.omega32());

        let solver = self.solver.clone().unwrap_or_default();
        let half = DEFAULT_HALF_WINDOW_WIDTHS * pulse1.width.max(pulse2.width);
        let initial_state = self.initial.clone().unwrap_or_default().resolve()?;
        let basis = match self.basis.clone().unwrap_or_default() {
            BasisSection {
                theta: Some(_),
                convention: Some(_),
            } => {
                return Err(CliError::Parse(
                    "[basis]: give either `theta` or `convention`, not both".into(),
                ))
            }
            BasisSection {
                theta: Some(theta), ..
            } => MixingBasis::new(theta)?,
            BasisSection {
                convention: Some(BasisConvention::PeakRabi),
                ..
            } => MixingBasis::from_peak_rabi(pulse1.peak_rabi, pulse2.peak_rabi)?,
            _ => MixingBasis::EQUAL,
        };

        let cfg = SimulationConfig {
            system,
            pulse1,
            pulse2,
            t_start: solver.t_start.unwrap_or(-half),
            t_end: solver.t_end.unwrap_or(half),
            dt: solver.dt.unwrap_or(DEFAULT_DT),
            record_stride: solver.record_stride.unwrap_or(DEFAULT_RECORD_STRIDE),
            initial_state,
            variant: solver.variant.unwrap_or_default(),
            basis,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// A fully explicit document for `config`.
    pub fn from_config(cfg: &SimulationConfig) -> Self {
        let pulse = |p: &ChirpedPulse| PulseSection {
            peak_rabi: Some(p.peak_rabi),
            width: Some(p.width),
            carrier: Some(p.carrier),
            chirp: Some(p.chirp),
        };
        ConfigDocument {
            system: Some(SystemSection {
                omega31: Some(cfg.system.omega31),
                omega21: Some(cfg.system.omega21),
                dipole31: Some(cfg.system.dipole31),
                dipole32: Some(cfg.system.dipole32),
            }),
            pulse1: Some(pulse(&cfg.pulse1)),
            pulse2: Some(pulse(&cfg.pulse2)),
            solver: Some(SolverSection {
                t_start: Some(cfg.t_start),
                t_end: Some(cfg.t_end),
                dt: Some(cfg.dt),
                record_stride: Some(cfg.record_stride),
                variant: Some(cfg.variant),
            }),
            initial: Some(InitialSection::from_state(&cfg.initial_state)),
            basis: Some(BasisSection {
                theta: Some(cfg.basis.theta),
                convention: None,
            }),
            sweep: None,
        }
    }

    pub fn from_sweep(spec: &SweepSpec) -> Self {
        ConfigDocument {
            sweep: Some(SweepSection {
                observable: spec.observable,
                axis1: spec.axis1,
                axis2: spec.axis2,
            }),
            ..Self::from_config(&spec.base)
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config documents always serialize")
    }
}

impl InitialSection {
    fn resolve(&self) -> Result<DensityMatrix, CliError> {
        let given = [
            self.level.is_some(),
            self.amplitudes.is_some(),
            self.rho_re.is_some() || self.rho_im.is_some(),
        ];
        if given.iter().filter(|&&g| g).count() > 1 {
            return Err(CliError::Parse(
                "[initial]: give only one of `level`, `amplitudes`, `rho_re`/`rho_im`".into(),
            ));
        }
        if let Some(a) = self.amplitudes {
            return Ok(DensityMatrix::pure(&amplitudes_to_vector(a))?);
        }
        if self.rho_re.is_some() || self.rho_im.is_some() {
            let re = self.rho_re.unwrap_or([[0.0; 3]; 3]);
            let im = self.rho_im.unwrap_or([[0.0; 3]; 3]);
            return Ok(DensityMatrix::from_parts(re, im)?);
        }
        Ok(DensityMatrix::basis_state(self.level.unwrap_or(1))?)
    }

    fn from_state(rho: &DensityMatrix) -> Self {
        for level in 1..=3 {
            if DensityMatrix::basis_state(level).as_ref() == Ok(rho) {
                return InitialSection {
                    level: Some(level),
                    ..Default::default()
                };
            }
        }
        let (re, im) = rho.to_parts();
        InitialSection {
            rho_re: Some(re),
            rho_im: Some(im),
            ..Default::default()
        }
    }
}

fn amplitudes_to_vector(a: [[f64; 2]; 3]) -> StateVector {
    StateVector::new(
        Complex64::new(a[0][0], a[0][1]),
        Complex64::new(a[1][0], a[1][1]),
        Complex64::new(a[2][0], a[2][1]),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use lambdachirp::{presets, SweepParameter};
    use proptest::prelude::*;

    const FIG2_MINIMAL: &str = r#"
        # only the laser values
        [pulse1]
        peak_rabi = 1.0
        chirp = 0.397

        [pulse2]
        peak_rabi = 2.4
        chirp = 0.397
    "#;

    #[test]
    fn minimal_document_fills_sodium_defaults() {
        let cfg = parse_run_config(FIG2_MINIMAL).unwrap();
        assert_eq!(cfg, presets::figure2());
    }

    #[test]
    fn negative_width_names_invariant() {
        let err = parse_config("[pulse1]\npeak_rabi = 1.0\nwidth = -1\n").unwrap_err();
        assert!(matches!(err, CliError::Invalid(_)));
        assert!(err.to_string().contains("width > 0"), "{err}");
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn misspelled_key_rejected() {
        let err = parse_config("[pulse1]\npeak_rabi = 1.0\nchrip = 0.4\n").unwrap_err();
        let msg = err.to_string();
        assert!(matches!(err, CliError::Parse(_)));
        assert!(msg.contains("chrip"), "{msg}");
        assert!(msg.contains("line 3"), "{msg}");
    }

    #[test]
    fn unknown_section_rejected() {
        assert!(parse_config("[pulse3]\npeak_rabi = 1.0\n").is_err());
    }

    #[test]
    fn carriers_follow_custom_system() {
        let cfg = parse_run_config("[system]\nomega31 = 2.0\nomega21 = 0.1\n").unwrap();
        assert_eq!(cfg.pulse1.carrier, 2.0);
        assert_eq!(cfg.pulse2.carrier, 1.9);
    }

    #[test]
    fn initial_state_forms() {
        let cfg = parse_run_config("[initial]\nlevel = 2\n").unwrap();
        assert_eq!(cfg.initial_state.population(2), 1.0);
        let cfg = parse_run_config("[initial]\namplitudes = [[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]]\n").unwrap();
        assert!((cfg.initial_state.population(1) - 0.5).abs() < 1e-15);
        assert!((cfg.initial_state.get(1, 2).im + 0.5).abs() < 1e-15);
        let cfg = parse_run_config(
            "[initial]\nrho_re = [[0.5, 0.0, 0.0], [0.0, 0.5, 0.0], [0.0, 0.0, 0.0]]\n",
        )
        .unwrap();
        assert!((cfg.initial_state.purity() - 0.5).abs() < 1e-15);
        assert!(parse_run_config("[initial]\nlevel = 1\namplitudes = [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]]\n").is_err());
        assert!(parse_run_config("[initial]\nlevel = 4\n").is_err());
    }

    #[test]
    fn basis_options() {
        let cfg = parse_run_config(&format!("{FIG2_MINIMAL}\n[basis]\nconvention = \"peak_rabi\"\n")).unwrap();
        assert!((cfg.basis.theta - (1.0f64).atan2(2.4)).abs() < 1e-15);
        let cfg = parse_run_config("[basis]\ntheta = 0.3\n").unwrap();
        assert_eq!(cfg.basis.theta, 0.3);
        assert!(parse_run_config("[basis]\ntheta = 0.3\nconvention = \"equal\"\n").is_err());
        assert!(parse_run_config("[basis]\ntheta = 2.0\n").is_err());
    }

    #[test]
    fn variant_spellings() {
        let cfg = parse_run_config("[solver]\nvariant = \"paper_literal\"\n").unwrap();
        assert_eq!(cfg.variant, EquationVariant::PaperLiteral);
        let cfg = parse_run_config("[solver]\nvariant = \"paper-literal\"\n").unwrap();
        assert_eq!(cfg.variant, EquationVariant::PaperLiteral);
        assert!(parse_run_config("[solver]\nvariant = \"rwa\"\n").is_err());
    }

    #[test]
    fn sweep_document() {
        let text = format!(
            "{FIG2_MINIMAL}\n[sweep]\nobservable = \"max_rho33\"\n\
             axis1 = {{ parameter = \"chirp_both\", min = 0.2, max = 0.6, count = 5 }}\n\
             axis2 = {{ parameter = \"pulse2.peak_rabi\", min = 1.5, max = 3.5, count = 4 }}\n"
        );
        let spec = parse_sweep_spec(&text).unwrap();
        assert_eq!(spec.axis1.parameter, SweepParameter::ChirpBoth);
        assert_eq!(spec.axis2.count, 4);
        assert_eq!(spec.observable, Observable::MaxRho33);
        assert!(parse_run_config(&text).is_err());
        assert!(parse_sweep_spec(FIG2_MINIMAL).is_err());

        let bad = text.replace("count = 5", "count = 0");
        assert!(parse_sweep_spec(&bad).unwrap_err().to_string().contains("count >= 1"));
        let bad = text.replace("chirp_both", "pulse9.chirp");
        assert!(matches!(parse_sweep_spec(&bad), Err(CliError::Parse(_))));
    }

    #[test]
    fn sweep_round_trip() {
        let spec = presets::figure3(7);
        let text = ConfigDocument::from_sweep(&spec).to_toml();
        assert_eq!(parse_sweep_spec(&text).unwrap(), spec);
    }

    proptest! {
        #[test]
        fn run_config_round_trip(
            o1 in 0.0f64..5.0, o2 in 0.0f64..5.0,
            c1 in -1.0f64..1.0, c2 in -1.0f64..1.0,
            w in 1.0f64..10.0,
            dt in 1e-4f64..1e-2,
            stride in 1usize..100,
            theta in 0.0f64..1.5,
            level in 1usize..=3,
            literal in proptest::bool::ANY,
            amps in proptest::option::of(proptest::array::uniform3(proptest::array::uniform2(-1.0f64..1.0))),
        ) {
            let mut cfg = presets::sodium(o1, o2, c1, c2);
            cfg.pulse2.width = w;
            cfg.dt = dt;
            cfg.record_stride = stride;
            cfg.basis = MixingBasis::new(theta).unwrap();
            cfg.initial_state = DensityMatrix::basis_state(level).unwrap();
            if let Some(a) = amps {
                if let Ok(rho) = DensityMatrix::pure(&amplitudes_to_vector(a)) {
                    cfg.initial_state = rho;
                }
            }
            if literal {
                cfg.variant = EquationVariant::PaperLiteral;
            }
            prop_assume!(cfg.validate().is_ok());
            let text = ConfigDocument::from_config(&cfg).to_toml();
            prop_assert_eq!(parse_run_config(&text).unwrap(), cfg);
        }
    }
}
