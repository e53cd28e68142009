use crate::error::{Error, Result};
use crate::state::{dark_bright_populations, DensityMatrix, DressedPopulations, MixingBasis};

/// One recorded instant of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    /// Time, fs.
    pub t: f64,
    pub rho: DensityMatrix,
    pub dressed: DressedPopulations,
}

impl Sample {
    /// Names of the values returned by [`Sample::values`], in order.
    pub const COLUMNS: [&'static str; 15] = [
        "t_fs",
        "rho11",
        "rho22",
        "rho33",
        "re_rho21",
        "im_rho21",
        "abs_rho21",
        "re_rho31",
        "im_rho31",
        "re_rho32",
        "im_rho32",
        "rho_BB",
        "rho_DD",
        "trace_err",
        "purity",
    ];

    pub fn new(t: f64, rho: DensityMatrix, basis: &MixingBasis) -> Self {
        Sample {
            t,
            rho,
            dressed: dark_bright_populations(&rho, basis),
        }
    }

    pub fn values(&self) -> [f64; 15] {
        let r = &self.rho;
        let r21 = r.get(2, 1);
        let r31 = r.get(3, 1);
        let r32 = r.get(3, 2);
        [
            self.t,
            r.population(1),
            r.population(2),
            r.population(3),
            r21.re,
            r21.im,
            r21.norm(),
            r31.re,
            r31.im,
            r32.re,
            r32.im,
            self.dressed.bright,
            self.dressed.dark,
            r.trace_error(),
            r.purity(),
        ]
    }
}

/// Time-ordered samples of a run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn last(&self) -> Option<&Sample> {
        self.samples.last()
    }

    pub fn max_trace_error(&self) -> f64 {
        self.samples.iter().map(|s| s.rho.trace_error()).fold(0.0, f64::max)
    }

    pub fn max_hermiticity_error(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.rho.hermiticity_error())
            .fold(0.0, f64::max)
    }

    pub fn min_purity(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.rho.purity())
            .fold(f64::INFINITY, f64::min)
    }

    /// max |Tr ρ² − 1| over the run.
    pub fn max_purity_deviation(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| (s.rho.purity() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Largest excursion of any population outside [0, 1].
    pub fn max_population_excursion(&self) -> f64 {
        self.samples
            .iter()
            .flat_map(|s| (1..=3).map(move |k| s.rho.population(k)))
            .map(|p| (-p).max(p - 1.0).max(0.0))
            .fold(0.0, f64::max)
    }
}

/// End-of-run readouts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FinalObservables {
    pub abs_rho21: f64,
    pub re_rho21: f64,
    pub rho11: f64,
    pub rho22: f64,
    pub rho33: f64,
    pub rho_dd: f64,
    /// Largest ρ₃₃ over all recorded samples.
    pub max_rho33: f64,
}

pub fn final_observables(traj: &Trajectory) -> Result<FinalObservables> {
    let last = traj.last().ok_or(Error::EmptyTrajectory)?;
    let rho = &last.rho;
    let max_rho33 = traj
        .samples
        .iter()
        .map(|s| s.rho.population(3))
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(FinalObservables {
        abs_rho21: rho.get(2, 1).norm(),
        re_rho21: rho.get(2, 1).re,
        rho11: rho.population(1),
        rho22: rho.population(2),
        rho33: rho.population(3),
        rho_dd: last.dressed.dark,
        max_rho33,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_trajectory_is_an_error() {
        assert_eq!(final_observables(&Trajectory::default()), Err(Error::EmptyTrajectory));
    }

    #[test]
    fn single_sample_readout() {
        let rho = DensityMatrix::diagonal([0.2, 0.3, 0.5]).unwrap();
        let traj = Trajectory {
            samples: vec![Sample::new(1.5, rho, &MixingBasis::EQUAL)],
        };
        let f = final_observables(&traj).unwrap();
        assert_eq!(f.rho11, 0.2);
        assert_eq!(f.rho22, 0.3);
        assert_eq!(f.rho33, 0.5);
        assert_eq!(f.max_rho33, 0.5);
        assert_eq!(f.abs_rho21, 0.0);
        assert!((f.rho_dd - 0.25).abs() < 1e-15);
        let v = traj.samples[0].values();
        assert_eq!(v[0], 1.5);
        assert_eq!(v[14], 0.2 * 0.2 + 0.3 * 0.3 + 0.5 * 0.5);
    }

    #[test]
    fn max_rho33_scans_all_samples() {
        let b = MixingBasis::EQUAL;
        let traj = Trajectory {
            samples: vec![
                Sample::new(0.0, DensityMatrix::diagonal([1.0, 0.0, 0.0]).unwrap(), &b),
                Sample::new(1.0, DensityMatrix::diagonal([0.2, 0.1, 0.7]).unwrap(), &b),
                Sample::new(2.0, DensityMatrix::diagonal([0.5, 0.5, 0.0]).unwrap(), &b),
            ],
        };
        let f = final_observables(&traj).unwrap();
        assert_eq!(f.max_rho33, 0.7);
        assert_eq!(f.rho33, 0.0);
    }
}
