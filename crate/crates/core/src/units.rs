//! Conversion between laboratory quantities and reduced units.
//!
//! All computation in this crate happens in reduced units; this module is
//! only the thin layer that gets physical inputs there.

use crate::error::{ensure_finite, Error, Result};

/// Reduced Planck constant in J·s (exact SI value).
pub const HBAR: f64 = 1.054_571_817e-34;

/// Physical scale of the problem.
///
/// Only the recoil angular frequency enters the dynamics. The laser
/// wavevector and atomic mass are informational, but when both are given
/// they must reproduce `ω_rec = ħ k_L² / (2m)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConfig {
    recoil_angular_frequency: f64,
    laser_wavevector: Option<f64>,
    atomic_mass: Option<f64>,
}

impl PhysicalConfig {
    /// Build a configuration from the recoil angular frequency in rad/s.
    pub fn new(recoil_angular_frequency: f64) -> Result<Self> {
        ensure_finite("recoil angular frequency", recoil_angular_frequency)?;
        if recoil_angular_frequency <= 0.0 {
            return Err(Error::invalid(format!(
                "recoil angular frequency must be positive, got {recoil_angular_frequency}"
            )));
        }
        Ok(Self {
            recoil_angular_frequency,
            laser_wavevector: None,
            atomic_mass: None,
        })
    }

    /// Build a configuration from the laser wavevector (1/m) and the atomic mass (kg).
    pub fn from_laser(laser_wavevector: f64, atomic_mass: f64) -> Result<Self> {
        ensure_finite("laser wavevector", laser_wavevector)?;
        ensure_finite("atomic mass", atomic_mass)?;
        if laser_wavevector <= 0.0 || atomic_mass <= 0.0 {
            return Err(Error::invalid(
                "laser wavevector and atomic mass must be positive",
            ));
        }
        let omega = HBAR * laser_wavevector * laser_wavevector / (2.0 * atomic_mass);
        Ok(Self {
            recoil_angular_frequency: omega,
            laser_wavevector: Some(laser_wavevector),
            atomic_mass: Some(atomic_mass),
        })
    }

    /// Attach the informational laser wavevector and atomic mass, checking
    /// them against the recoil frequency to a relative tolerance of 1e-9.
    pub fn with_laser(mut self, laser_wavevector: f64, atomic_mass: f64) -> Result<Self> {
        let derived = Self::from_laser(laser_wavevector, atomic_mass)?;
        let rel = (derived.recoil_angular_frequency - self.recoil_angular_frequency).abs()
            / self.recoil_angular_frequency;
        if rel > 1e-9 {
            return Err(Error::invalid(format!(
                "ħk_L²/(2m) = {} rad/s disagrees with recoil angular frequency {} rad/s",
                derived.recoil_angular_frequency, self.recoil_angular_frequency
            )));
        }
        self.laser_wavevector = Some(laser_wavevector);
        self.atomic_mass = Some(atomic_mass);
        Ok(self)
    }

    pub fn recoil_angular_frequency(&self) -> f64 {
        self.recoil_angular_frequency
    }

    pub fn laser_wavevector(&self) -> Option<f64> {
        self.laser_wavevector
    }

    pub fn atomic_mass(&self) -> Option<f64> {
        self.atomic_mass
    }
}

/// Dimensionless time `τ = ω_rec t` for a laboratory time in seconds.
pub fn to_reduced(cfg: &PhysicalConfig, t: f64) -> Result<f64> {
    ensure_finite("time", t)?;
    if t < 0.0 {
        return Err(Error::invalid(format!("time must be non-negative, got {t}")));
    }
    Ok(cfg.recoil_angular_frequency * t)
}

/// Reduced coupling `q = V₀ / 4` for a light-shift amplitude `V₀` given in
/// units of `ħω_rec`.
pub fn q_from_potential(v0: f64) -> Result<f64> {
    ensure_finite("potential amplitude", v0)?;
    if v0 < 0.0 {
        return Err(Error::invalid(format!(
            "potential amplitude must be non-negative, got {v0}"
        )));
    }
    Ok(v0 / 4.0)
}
