//! Physical constants and the conversion between field amplitude and Rabi
//! frequency.
//!
//! The dynamics are parameterized entirely by Rabi frequencies in rad/fs, so
//! this is the only place where SI constants appear.

use crate::error::{Error, Result};

/// Reduced Planck constant, J·s (CODATA 2018).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Elementary charge, C (exact in SI 2019).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Bohr radius, m (CODATA 2018).
pub const BOHR_RADIUS: f64 = 5.291_772_109_03e-11;

/// Atomic unit of electric dipole moment, e·a₀, in C·m.
pub const ATOMIC_DIPOLE: f64 = ELEMENTARY_CHARGE * BOHR_RADIUS;

const FS_PER_S: f64 = 1e15;

/// Rabi frequency μE/ħ in rad/fs for a field amplitude in V/m and a dipole
/// moment in units of e·a₀.
pub fn rabi_from_field(field_amplitude: f64, dipole: f64) -> Result<f64> {
    check_dipole(dipole)?;
    Ok(dipole * ATOMIC_DIPOLE * field_amplitude / HBAR / FS_PER_S)
}

/// Inverse of [`rabi_from_field`]: field amplitude in V/m producing the given
/// Rabi frequency (rad/fs).
pub fn field_from_rabi(rabi: f64, dipole: f64) -> Result<f64> {
    check_dipole(dipole)?;
    Ok(rabi * FS_PER_S * HBAR / (dipole * ATOMIC_DIPOLE))
}

fn check_dipole(dipole: f64) -> Result<()> {
    if dipole > 0.0 && dipole.is_finite() {
        Ok(())
    } else {
        Err(Error::param("dipole", dipole, "dipole > 0"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_field_gives_zero_rabi() {
        assert_eq!(rabi_from_field(0.0, 2.49).unwrap(), 0.0);
    }

    #[test]
    fn sodium_dipole_field_for_unit_rabi() {
        // hbar * 1e15 / (2.49 e a0) evaluated at 40 digits.
        let expected = 4_995_342_690.076_530_3;
        let field = field_from_rabi(1.0, 2.49).unwrap();
        assert!((field - expected).abs() / expected < 1e-13, "{field}");
    }

    #[test]
    fn round_trip() {
        for &e in &[1.0, 3.3e7, 5e9, 1.2e11] {
            let back = field_from_rabi(rabi_from_field(e, 2.49).unwrap(), 2.49).unwrap();
            assert!((back - e).abs() / e < 1e-12);
        }
    }

    #[test]
    fn linear_in_field() {
        let a = rabi_from_field(1e9, 1.7).unwrap();
        let b = rabi_from_field(3e9, 1.7).unwrap();
        assert!((b - 3.0 * a).abs() < 1e-15 * b.abs().max(1.0));
    }

    #[test]
    fn rejects_non_positive_dipole() {
        for d in [0.0, -2.49, f64::NAN] {
            let err = rabi_from_field(1e9, d).unwrap_err();
            assert!(err.to_string().contains("dipole > 0"), "{err}");
            assert!(field_from_rabi(1.0, d).is_err());
        }
    }
}
