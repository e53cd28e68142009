use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Level structure of the Λ atom: two lower states |1⟩, |2⟩ coupled to one
/// excited state |3⟩. Only energy differences are stored; |1⟩ is the zero of
/// energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaSystem {
    /// ω₃₁, rad/fs.
    pub omega31: f64,
    /// ω₂₁, rad/fs.
    pub omega21: f64,
    /// μ₃₁ in units of e·a₀.
    pub dipole31: f64,
    /// μ₃₂ in units of e·a₀.
    pub dipole32: f64,
}

impl LambdaSystem {
    /// The sodium-like parameter set: ω₃₁ = 3.18 rad/fs, ω₂₁ = 1e-5 rad/fs,
    /// μ₃₁ = μ₃₂ = 2.49 e·a₀.
    pub const SODIUM: LambdaSystem = LambdaSystem {
        omega31: 3.18,
        omega21: 1e-5,
        dipole31: 2.49,
        dipole32: 2.49,
    };

    pub fn new(omega31: f64, omega21: f64, dipole31: f64, dipole32: f64) -> Result<Self> {
        let system = LambdaSystem {
            omega31,
            omega21,
            dipole31,
            dipole32,
        };
        system.validate()?;
        Ok(system)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega21 >= 0.0 && self.omega21.is_finite()) {
            return Err(Error::param("system.omega21", self.omega21, "omega21 >= 0"));
        }
        if !(self.omega31 > self.omega21 && self.omega31.is_finite()) {
            return Err(Error::param(
                "system.omega31",
                self.omega31,
                "omega31 > omega21",
            ));
        }
        for (name, d) in [("system.dipole31", self.dipole31), ("system.dipole32", self.dipole32)] {
            if !(d > 0.0 && d.is_finite()) {
                return Err(Error::param(name, d, "dipole > 0"));
            }
        }
        Ok(())
    }

    /// ω₃₂ = ω₃₁ − ω₂₁.
    #[inline]
    pub fn omega32(&self) -> f64 {
        self.omega31 - self.omega21
    }

    /// Level energies (ω₁, ω₂, ω₃) relative to |1⟩.
    #[inline]
    pub fn energies(&self) -> [f64; 3] {
        [0.0, self.omega21, self.omega31]
    }
}

impl Default for LambdaSystem {
    fn default() -> Self {
        LambdaSystem::SODIUM
    }
}
