//! Time profiles `q(τ)` of the reduced coupling.

use crate::error::{ensure_finite, Error, Result};

/// Gaussian envelopes are cut at this many standard deviations on each side.
pub const GAUSSIAN_TRUNCATION_SIGMAS: f64 = 5.0;

/// Pulse envelope `q(τ) ≥ 0`, zero outside its support `[start, end]`.
#[derive(Debug, Clone, PartialEq)]
pub enum PulseEnvelope {
    /// Constant `q_max` on `[start, end]`.
    Rectangular { q_max: f64, start: f64, end: f64 },
    /// `q_max · exp(-(τ - center)² / (2σ²))`, truncated at `center ± 5σ`.
    Gaussian { q_max: f64, center: f64, sigma: f64 },
    /// Piecewise-linear interpolation of `(τ, q)` samples, strictly increasing in `τ`.
    Tabulated { samples: Vec<(f64, f64)> },
}

impl PulseEnvelope {
    pub fn rectangular(q_max: f64, start: f64, end: f64) -> Result<Self> {
        ensure_finite("q_max", q_max)?;
        ensure_finite("pulse start", start)?;
        ensure_finite("pulse end", end)?;
        if q_max < 0.0 {
            return Err(Error::invalid(format!("q_max must be non-negative, got {q_max}")));
        }
        if end < start {
            return Err(Error::invalid(format!(
                "pulse end {end} precedes pulse start {start}"
            )));
        }
        Ok(PulseEnvelope::Rectangular { q_max, start, end })
    }

    pub fn gaussian(q_max: f64, center: f64, sigma: f64) -> Result<Self> {
        ensure_finite("q_max", q_max)?;
        ensure_finite("pulse center", center)?;
        ensure_finite("sigma", sigma)?;
        if q_max < 0.0 {
            return Err(Error::invalid(format!("q_max must be non-negative, got {q_max}")));
        }
        if sigma <= 0.0 {
            return Err(Error::invalid(format!("sigma must be positive, got {sigma}")));
        }
        Ok(PulseEnvelope::Gaussian { q_max, center, sigma })
    }

    pub fn tabulated(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::invalid("a tabulated envelope needs at least two samples"));
        }
        for &(t, q) in &samples {
            ensure_finite("sample time", t)?;
            ensure_finite("sample coupling", q)?;
            if q < 0.0 {
                return Err(Error::invalid(format!(
                    "tabulated coupling must be non-negative, got {q} at τ = {t}"
                )));
            }
        }
        if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::invalid("tabulated sample times must be strictly increasing"));
        }
        Ok(PulseEnvelope::Tabulated { samples })
    }

    /// An envelope that is identically zero, with an empty support at `τ`.
    pub fn off(at: f64) -> Self {
        PulseEnvelope::Rectangular { q_max: 0.0, start: at, end: at }
    }

    /// `[τ_start, τ_end]`, outside of which `q(τ) = 0`.
    pub fn support(&self) -> (f64, f64) {
        match self {
            PulseEnvelope::Rectangular { start, end, .. } => (*start, *end),
            PulseEnvelope::Gaussian { center, sigma, .. } => (
                center - GAUSSIAN_TRUNCATION_SIGMAS * sigma,
                center + GAUSSIAN_TRUNCATION_SIGMAS * sigma,
            ),
            PulseEnvelope::Tabulated { samples } => {
                (samples[0].0, samples[samples.len() - 1].0)
            }
        }
    }

    /// Length of the support.
    pub fn duration(&self) -> f64 {
        let (a, b) = self.support();
        b - a
    }

    /// Largest value of `q(τ)` over the support.
    pub fn q_max(&self) -> f64 {
        match self {
            PulseEnvelope::Rectangular { q_max, .. } | PulseEnvelope::Gaussian { q_max, .. } => {
                *q_max
            }
            PulseEnvelope::Tabulated { samples } => {
                samples.iter().map(|s| s.1).fold(0.0, f64::max)
            }
        }
    }

    /// `q(τ)`.
    pub fn value(&self, tau: f64) -> f64 {
        let (a, b) = self.support();
        if !(a..=b).contains(&tau) {
            return 0.0;
        }
        match self {
            PulseEnvelope::Rectangular { q_max, .. } => *q_max,
            PulseEnvelope::Gaussian { q_max, center, sigma } => {
                let x = (tau - center) / sigma;
                q_max * (-0.5 * x * x).exp()
            }
            PulseEnvelope::Tabulated { samples } => {
                let i = samples.partition_point(|s| s.0 <= tau);
                if i == samples.len() {
                    return samples[i - 1].1;
                }
                let (t0, q0) = samples[i - 1];
                let (t1, q1) = samples[i];
                q0 + (q1 - q0) * (tau - t0) / (t1 - t0)
            }
        }
    }

    /// Same profile with every value multiplied by `factor ≥ 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        ensure_finite("scale factor", factor)?;
        if factor < 0.0 {
            return Err(Error::invalid(format!(
                "scale factor must be non-negative, got {factor}"
            )));
        }
        Ok(match self {
            PulseEnvelope::Rectangular { q_max, start, end } => PulseEnvelope::Rectangular {
                q_max: q_max * factor,
                start: *start,
                end: *end,
            },
            PulseEnvelope::Gaussian { q_max, center, sigma } => PulseEnvelope::Gaussian {
                q_max: q_max * factor,
                center: *center,
                sigma: *sigma,
            },
            PulseEnvelope::Tabulated { samples } => PulseEnvelope::Tabulated {
                samples: samples.iter().map(|&(t, q)| (t, q * factor)).collect(),
            },
        })
    }

    /// Same profile moved by `dt` in time.
    pub fn shifted(&self, dt: f64) -> Self {
        match self {
            PulseEnvelope::Rectangular { q_max, start, end } => PulseEnvelope::Rectangular {
                q_max: *q_max,
                start: start + dt,
                end: end + dt,
            },
            PulseEnvelope::Gaussian { q_max, center, sigma } => PulseEnvelope::Gaussian {
                q_max: *q_max,
                center: center + dt,
                sigma: *sigma,
            },
            PulseEnvelope::Tabulated { samples } => PulseEnvelope::Tabulated {
                samples: samples.iter().map(|&(t, q)| (t + dt, q)).collect(),
            },
        }
    }

    /// Times where `q(τ)` or its derivative may jump. An integrator should
    /// never step across one of these.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            PulseEnvelope::Tabulated { samples } => samples.iter().map(|s| s.0).collect(),
            _ => {
                let (a, b) = self.support();
                vec![a, b]
            }
        }
    }

    /// True when `q(τ) = 0` everywhere.
    pub fn is_off(&self) -> bool {
        self.q_max() == 0.0 || self.duration() == 0.0
    }

    /// Pulse area `∫ q dτ` over the support.
    pub fn area(&self) -> f64 {
        match self {
            PulseEnvelope::Rectangular { q_max, start, end } => q_max * (end - start),
            PulseEnvelope::Gaussian { q_max, sigma, .. } => {
                let cut = GAUSSIAN_TRUNCATION_SIGMAS / std::f64::consts::SQRT_2;
                q_max * sigma * (2.0 * std::f64::consts::PI).sqrt() * libm::erf(cut)
            }
            PulseEnvelope::Tabulated { samples } => samples
                .windows(2)
                .map(|w| 0.5 * (w[0].1 + w[1].1) * (w[1].0 - w[0].0))
                .sum(),
        }
    }
}
