//! Density matrices and the dark/bright dressed-state projection.

use std::f64::consts::FRAC_PI_4;
use std::f64::consts::FRAC_PI_2;

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use num_complex::Complex64;

/// Three-component state vector in the {|1⟩, |2⟩, |3⟩} basis.
pub type StateVector = Vector3<C64>;

/// Tolerance on Hermiticity and unit trace for a valid state.
pub const STATE_TOL: f64 = 1e-12;
/// Smallest eigenvalue accepted as positive semidefinite.
pub const PSD_TOL: f64 = 1e-10;

/// 3×3 density matrix. Index 0 is |1⟩, 1 is |2⟩, 2 is |3⟩; the accessors
/// take the 1-based level labels used in the physics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix(Matrix3<C64>);

impl DensityMatrix {
    /// Wraps a matrix without checking any invariant.
    pub fn from_matrix_unchecked(m: Matrix3<C64>) -> Self {
        DensityMatrix(m)
    }

    /// Wraps a matrix, rejecting anything that is not a valid state.
    pub fn from_matrix(m: Matrix3<C64>) -> Result<Self> {
        let rho = DensityMatrix(m);
        rho.validate()?;
        Ok(rho)
    }

    /// |k⟩⟨k| for level `k` in 1..=3.
    pub fn basis_state(level: usize) -> Result<Self> {
        if !(1..=3).contains(&level) {
            return Err(Error::param("initial.level", level as f64, "level in 1..=3"));
        }
        let mut m = Matrix3::zeros();
        m[(level - 1, level - 1)] = C64::new(1.0, 0.0);
        Ok(DensityMatrix(m))
    }

    /// |ψ⟩⟨ψ| for the normalized version of `psi`.
    pub fn pure(psi: &Vector3<C64>) -> Result<Self> {
        let norm = psi.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidConfig("state vector has zero norm".into()));
        }
        let psi = psi / C64::new(norm, 0.0);
        Ok(DensityMatrix(psi * psi.adjoint()))
    }

    /// Incoherent mixture with the given populations.
    pub fn diagonal(populations: [f64; 3]) -> Result<Self> {
        let m = Matrix3::from_diagonal(&Vector3::from(populations.map(|p| C64::new(p, 0.0))));
        Self::from_matrix(m)
    }

    /// Builds ρ from its real and imaginary parts, row by row, and validates.
    pub fn from_parts(re: [[f64; 3]; 3], im: [[f64; 3]; 3]) -> Result<Self> {
        Self::from_matrix(Matrix3::from_fn(|i, j| C64::new(re[i][j], im[i][j])))
    }

    /// Real and imaginary parts, row by row.
    pub fn to_parts(&self) -> ([[f64; 3]; 3], [[f64; 3]; 3]) {
        let mut re = [[0.0; 3]; 3];
        let mut im = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                re[i][j] = self.0[(i, j)].re;
                im[i][j] = self.0[(i, j)].im;
            }
        }
        (re, im)
    }

    #[inline]
    pub fn matrix(&self) -> &Matrix3<C64> {
        &self.0
    }

    #[inline]
    pub fn into_matrix(self) -> Matrix3<C64> {
        self.0
    }

    /// ρ_ij with 1-based labels.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i - 1, j - 1)]
    }

    /// ρ_kk (real part).
    #[inline]
    pub fn population(&self, k: usize) -> f64 {
        self.get(k, k).re
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    /// |Tr ρ − 1|.
    pub fn trace_error(&self) -> f64 {
        (self.trace() - C64::new(1.0, 0.0)).norm()
    }

    /// Tr ρ², computed as Tr(ρρ†) which equals Tr ρ² for Hermitian ρ.
    pub fn purity(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    /// max_ij |ρ_ij − conj(ρ_ji)|.
    pub fn hermiticity_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in i..3 {
                worst = worst.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Largest element modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// (ρ + ρ†)/2.
    pub fn hermitized(&self) -> Self {
        DensityMatrix((self.0 + self.0.adjoint()) * C64::new(0.5, 0.0))
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> [f64; 3] {
        let mut ev: Vec<f64> = self.hermitized().0.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        [ev[0], ev[1], ev[2]]
    }

    /// Checks every state invariant at the default tolerances.
    pub fn validate(&self) -> Result<()> {
        if self.0.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidConfig("density matrix has non-finite entries".into()));
        }
        let herm = self.hermiticity_error();
        if herm > STATE_TOL {
            return Err(Error::param("rho", herm, "rho Hermitian"));
        }
        let tr = self.trace_error();
        if tr > STATE_TOL {
            return Err(Error::param("rho", tr, "Tr rho = 1"));
        }
        for k in 1..=3 {
            let p = self.population(k);
            if !(-STATE_TOL..=1.0 + STATE_TOL).contains(&p) {
                return Err(Error::param(format!("rho{k}{k}"), p, "0 <= rho_kk <= 1"));
            }
        }
        let min_ev = self.eigenvalues()[0];
        if min_ev < -PSD_TOL {
            return Err(Error::param("rho", min_ev, "rho positive semidefinite"));
        }
        Ok(())
    }

    /// Dominant eigenvector, the state vector of a pure ρ up to a global phase.
    pub fn dominant_vector(&self) -> Vector3<C64> {
        let eig = self.hermitized().0.symmetric_eigen();
        let k = eig.eigenvalues.imax();
        eig.eigenvectors.column(k).into_owned()
    }
}

/// Rotation of the lower-state pair into bright and dark superpositions:
///
/// |B⟩ = sinθ|1⟩ + cosθ|2⟩,  |D⟩ = cosθ|1⟩ − sinθ|2⟩
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixingBasis {
    pub theta: f64,
}

impl MixingBasis {
    /// θ = π/4, the equal-superposition basis.
    pub const EQUAL: MixingBasis = MixingBasis { theta: FRAC_PI_4 };

    pub fn new(theta: f64) -> Result<Self> {
        let basis = MixingBasis { theta };
        basis.validate()?;
        Ok(basis)
    }

    /// θ = arctan(Ω₁₀/Ω₂₀), so that |B⟩ ∝ Ω₁₀|1⟩ + Ω₂₀|2⟩.
    pub fn from_peak_rabi(omega10: f64, omega20: f64) -> Result<Self> {
        if !(omega10 >= 0.0 && omega20 >= 0.0) || omega10 + omega20 == 0.0 {
            return Err(Error::InvalidConfig(
                "peak-Rabi mixing angle needs non-negative, not both zero, Rabi frequencies".into(),
            ));
        }
        Self::new(omega10.atan2(omega20))
    }

    pub fn validate(&self) -> Result<()> {
        if (0.0..=FRAC_PI_2).contains(&self.theta) {
            Ok(())
        } else {
            Err(Error::param("basis.theta", self.theta, "0 <= theta <= pi/2"))
        }
    }

    pub fn bright(&self) -> Vector3<C64> {
        let (s, c) = self.theta.sin_cos();
        Vector3::new(C64::new(s, 0.0), C64::new(c, 0.0), C64::new(0.0, 0.0))
    }

    pub fn dark(&self) -> Vector3<C64> {
        let (s, c) = self.theta.sin_cos();
        Vector3::new(C64::new(c, 0.0), C64::new(-s, 0.0), C64::new(0.0, 0.0))
    }
}

impl Default for MixingBasis {
    fn default() -> Self {
        MixingBasis::EQUAL
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedPopulations {
    /// ρ_BB
    pub bright: f64,
    /// ρ_DD
    pub dark: f64,
}

/// ⟨B|ρ|B⟩ and ⟨D|ρ|D⟩.
pub fn dark_bright_populations(rho: &DensityMatrix, basis: &MixingBasis) -> DressedPopulations {
    let (s, c) = basis.theta.sin_cos();
    let p1 = rho.population(1);
    let p2 = rho.population(2);
    let cross = 2.0 * s * c * rho.get(1, 2).re;
    DressedPopulations {
        bright: s * s * p1 + c * c * p2 + cross,
        dark: c * c * p1 + s * s * p2 - cross,
    }
}
