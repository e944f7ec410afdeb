//! Second-order Bragg diffraction `|+2⟩ ↔ |-2⟩` at `κ = 0`.
//!
//! Eliminating `|0⟩` and `|±4⟩` to second order in `q` leaves the 2×2 block
//!
//! ```text
//! H_eff = [ 4 + q²/6   q²/4     ]
//!         [ q²/4       4 + q²/6 ]
//! ```
//!
//! and an energy shift `-q²/2` of `|0⟩`. Both are resonant problems whose
//! evolution only depends on the Rabi phase `φ_r = ∫ q²/2 dτ`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::envelope::{PulseEnvelope, GAUSSIAN_TRUNCATION_SIGMAS};
use crate::error::{ensure_finite, Error, Result};
use crate::state::PlaneWaveState;

/// Population allowed outside `p ∈ {-1, 0, 1}` on input to [`bragg_apply`].
const MANIFOLD_LEAK: f64 = 1e-9;

/// Effective 2×2 model of the `|±2⟩` manifold and the shift of `|0⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BraggEffectiveModel {
    pub q: f64,
    /// Second-order energy shift of `|0⟩`, `-q²/2`.
    pub e0_shift: f64,
    /// Diagonal element `4 + q²/6`.
    pub diag: f64,
    /// Off-diagonal coupling `q²/4`.
    pub coupling: f64,
}

impl BraggEffectiveModel {
    /// True when `q ≤ 1`, where the neglected `q⁴` terms stay around 10% or less.
    pub fn within_validity(&self) -> bool {
        self.q <= 1.0
    }

    /// Splitting `2 · q²/4` between the symmetric and antisymmetric states.
    pub fn splitting(&self) -> f64 {
        2.0 * self.coupling
    }

    /// Eigenvalues `(diag - coupling, diag + coupling)`.
    pub fn eigenvalues(&self) -> (f64, f64) {
        (self.diag - self.coupling, self.diag + self.coupling)
    }
}

pub fn effective_two_level(q: f64) -> Result<BraggEffectiveModel> {
    ensure_finite("q", q)?;
    if q < 0.0 {
        return Err(Error::invalid(format!("q must be non-negative, got {q}")));
    }
    let q2 = q * q;
    let model = BraggEffectiveModel {
        q,
        e0_shift: -0.5 * q2,
        diag: 4.0 + q2 / 6.0,
        coupling: 0.25 * q2,
    };
    if !model.within_validity() {
        log::warn!("q = {q} is outside the second-order validity range q <= 1");
    }
    Ok(model)
}

fn erf_truncation() -> f64 {
    libm::erf(GAUSSIAN_TRUNCATION_SIGMAS)
}

/// Rabi phase `φ_r = ∫ q(τ)²/2 dτ` over the support of the envelope.
pub fn rabi_phase(env: &PulseEnvelope) -> f64 {
    match env {
        PulseEnvelope::Rectangular { q_max, start, end } => 0.5 * q_max * q_max * (end - start),
        PulseEnvelope::Gaussian { q_max, sigma, .. } => {
            // ∫ exp(-x²/σ²) over ±5σ is σ√π erf(5)
            0.5 * q_max * q_max * sigma * PI.sqrt() * erf_truncation()
        }
        PulseEnvelope::Tabulated { samples } => samples
            .windows(2)
            .map(|w| {
                let ((t0, q0), (t1, q1)) = (w[0], w[1]);
                (t1 - t0) * (q0 * q0 + q0 * q1 + q1 * q1) / 6.0
            })
            .sum(),
    }
}

/// Pulse family to be scaled into a π pulse.
#[derive(Debug, Clone, PartialEq)]
pub enum PulseShape {
    Rectangular { duration: f64 },
    Gaussian { sigma: f64 },
    /// Relative profile `(τ, f)`; the designed pulse is `s · f(τ)`.
    Tabulated { profile: Vec<(f64, f64)> },
}

/// Peak coupling `q_max` that makes `φ_r = π`.
pub fn design_pi_pulse(shape: &PulseShape) -> Result<f64> {
    match shape {
        PulseShape::Rectangular { duration } => {
            ensure_finite("duration", *duration)?;
            if *duration <= 0.0 {
                return Err(Error::invalid(format!("duration must be positive, got {duration}")));
            }
            Ok((2.0 * PI / duration).sqrt())
        }
        PulseShape::Gaussian { sigma } => {
            ensure_finite("sigma", *sigma)?;
            if *sigma <= 0.0 {
                return Err(Error::invalid(format!("sigma must be positive, got {sigma}")));
            }
            Ok((2.0 * PI.sqrt() / (sigma * erf_truncation())).sqrt())
        }
        PulseShape::Tabulated { profile } => {
            let base = PulseEnvelope::tabulated(profile.clone())?;
            if rabi_phase(&base) <= 0.0 {
                return Err(Error::invalid("tabulated profile has zero Rabi phase"));
            }
            let phase_at = |s: f64| -> Result<f64> { Ok(rabi_phase(&base.scaled(s)?)) };
            let mut lo = 0.0;
            let mut hi = 1.0;
            while phase_at(hi)? < PI {
                lo = hi;
                hi *= 2.0;
            }
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if phase_at(mid)? < PI {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let s = 0.5 * (lo + hi);
            Ok(s * base.q_max())
        }
    }
}

/// Apply a Bragg pulse to a state living on `p ∈ {-1, 0, 1}` at `κ = 0`.
///
/// With `φ_r` the Rabi phase and `Δτ` the pulse duration:
///
/// ```text
/// a₀  → e^{iφ_r} a₀
/// a±  → e^{-i(4Δτ + φ_r/3)} [cos(φ_r/2) a± - i sin(φ_r/2) a∓]
/// ```
///
/// Orders outside the manifold (allowed up to 1e-9 in population) only
/// receive their free-flight phase.
pub fn bragg_apply(state: &PlaneWaveState, env: &PulseEnvelope) -> Result<PlaneWaveState> {
    if state.kappa() != 0.0 {
        return Err(Error::invalid(format!(
            "the Bragg model is defined at κ = 0, got κ = {}",
            state.kappa()
        )));
    }
    let outside: f64 = state.iter().filter(|(p, _)| p.abs() > 1).map(|(_, a)| a.norm_sqr()).sum();
    if outside > MANIFOLD_LEAK {
        return Err(Error::invalid(format!(
            "population {outside:e} lies outside the p ∈ {{-1, 0, 1}} manifold"
        )));
    }
    if env.q_max() > 1.0 {
        log::warn!(
            "Bragg pulse with q_max = {} is outside the second-order validity range q <= 1",
            env.q_max()
        );
    }

    let phi = rabi_phase(env);
    let dtau = env.duration();
    let padded = state.padded(-1, 1);
    let a0 = padded.amplitude(0);
    let am = padded.amplitude(-1);
    let ap = padded.amplitude(1);

    let common = Complex64::from_polar(1.0, -(4.0 * dtau + phi / 3.0));
    let (s, c) = (0.5 * phi).sin_cos();
    let mix = Complex64::new(0.0, -s);
    let new_p = common * (c * ap + mix * am);
    let new_m = common * (c * am + mix * ap);
    let new_0 = Complex64::from_polar(1.0, phi) * a0;

    let p_min = padded.p_min();
    let amps = padded
        .iter()
        .map(|(p, a)| match p {
            0 => new_0,
            1 => new_p,
            -1 => new_m,
            _ => a * Complex64::from_polar(1.0, -4.0 * (p * p) as f64 * dtau),
        })
        .collect();
    Ok(PlaneWaveState::from_raw(0.0, p_min, amps))
}
