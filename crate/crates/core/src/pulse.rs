//! Few-cycle pulses with a cubic (nonlinear) chirp.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One linearly coupled laser field, described directly by the Rabi frequency
/// it drives on its transition:
///
/// Ω(t) = Ω₀ exp(−t²/τ²) cos(ω₀t + χt³)
///
/// The real, oscillating field is kept in full (no envelope approximation) and
/// the carrier-envelope phase is zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChirpedPulse {
    /// Peak Rabi frequency Ω₀, rad/fs.
    pub peak_rabi: f64,
    /// Gaussian width τ, fs.
    pub width: f64,
    /// Carrier angular frequency ω₀, rad/fs.
    pub carrier: f64,
    /// Cubic chirp rate χ, fs⁻³.
    pub chirp: f64,
}

impl ChirpedPulse {
    pub fn new(peak_rabi: f64, width: f64, carrier: f64, chirp: f64) -> Result<Self> {
        let pulse = ChirpedPulse {
            peak_rabi,
            width,
            carrier,
            chirp,
        };
        pulse.validate("pulse")?;
        Ok(pulse)
    }

    /// Checks the invariants, prefixing parameter names with `label` in errors.
    pub fn validate(&self, label: &str) -> Result<()> {
        if !(self.width > 0.0 && self.width.is_finite()) {
            return Err(Error::param(format!("{label}.width"), self.width, "width > 0"));
        }
        if !(self.peak_rabi >= 0.0 && self.peak_rabi.is_finite()) {
            return Err(Error::param(
                format!("{label}.peak_rabi"),
                self.peak_rabi,
                "peak_rabi >= 0",
            ));
        }
        if !(self.carrier >= 0.0 && self.carrier.is_finite()) {
            return Err(Error::param(
                format!("{label}.carrier"),
                self.carrier,
                "carrier >= 0",
            ));
        }
        if !self.chirp.is_finite() {
            return Err(Error::param(format!("{label}.chirp"), self.chirp, "chirp finite"));
        }
        Ok(())
    }

    #[inline]
    pub fn envelope(&self, t: f64) -> f64 {
        let x = t / self.width;
        (-x * x).exp()
    }

    #[inline]
    pub fn phase(&self, t: f64) -> f64 {
        self.carrier * t + self.chirp * t * t * t
    }

    /// Instantaneous Rabi frequency Ω(t), rad/fs.
    #[inline]
    pub fn rabi(&self, t: f64) -> f64 {
        self.peak_rabi * self.envelope(t) * self.phase(t).cos()
    }

    /// Time derivative of the phase, ω₀ + 3χt², rad/fs.
    #[inline]
    pub fn instantaneous_frequency(&self, t: f64) -> f64 {
        self.carrier + 3.0 * self.chirp * t * t
    }

    /// Half-width of the interval on which the envelope is at least
    /// `fraction` of its peak.
    pub fn envelope_half_width(&self, fraction: f64) -> f64 {
        self.width * (-fraction.ln()).max(0.0).sqrt()
    }

    /// Largest |instantaneous frequency| over `[t0, t1]`.
    pub fn max_abs_frequency(&self, t0: f64, t1: f64) -> f64 {
        // ω(t) is even and monotone in |t|, so the extremes sit at the ends of
        // the interval or at t = 0.
        let mut candidates = vec![t0, t1];
        if t0 < 0.0 && t1 > 0.0 {
            candidates.push(0.0);
        }
        candidates
            .into_iter()
            .map(|t| self.instantaneous_frequency(t).abs())
            .fold(0.0, f64::max)
    }
}
