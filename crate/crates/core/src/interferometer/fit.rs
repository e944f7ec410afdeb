use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Least-squares fit of `S(τ) = A cos²(ωτ + Φ) + B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseFit {
    /// `Φ` in `[0, π)`.
    pub phase: f64,
    pub amplitude: f64,
    pub offset: f64,
    /// Root-mean-square of the fit residuals.
    pub residual: f64,
}

/// Minimum number of samples accepted by [`extract_phase`].
pub const MIN_SAMPLES: usize = 8;

/// Below this determinant of the normalized Gram matrix the three basis
/// functions are treated as linearly dependent on the sample grid.
const GRAM_FLOOR: f64 = 1e-8;

/// A modulation smaller than this fraction of the signal is no modulation.
const CONTRAST_FLOOR: f64 = 1e-9;

/// Fit `S(τ) = A cos²(ωτ + Φ) + B`.
///
/// Uses `A cos²(x + Φ) + B = A/2 + B + (A/2) cos(2x + 2Φ)`, which is linear in
/// the projections of `S` on `{1, cos 2ωτ, sin 2ωτ}`. The samples must span
/// at least half a period `π/(2ω)` of the signal.
pub fn extract_phase(times: &[f64], signal: &[f64], angular_frequency: f64) -> Result<PhaseFit> {
    if times.len() != signal.len() {
        return Err(Error::invalid(format!(
            "{} sample times but {} signal values",
            times.len(),
            signal.len()
        )));
    }
    if times.len() < MIN_SAMPLES {
        return Err(Error::invalid(format!(
            "phase fit needs at least {MIN_SAMPLES} samples, got {}",
            times.len()
        )));
    }
    if !angular_frequency.is_finite() || angular_frequency <= 0.0 {
        return Err(Error::invalid(format!(
            "angular frequency must be positive, got {angular_frequency}"
        )));
    }
    if times.iter().chain(signal).any(|v| !v.is_finite()) {
        return Err(Error::invalid("sample times and signal values must be finite"));
    }
    let (lo, hi) = times
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &t| (lo.min(t), hi.max(t)));
    let half_period = PI / (2.0 * angular_frequency);
    if hi - lo < half_period * (1.0 - 1e-12) {
        return Err(Error::invalid(format!(
            "samples span {} but the fit needs at least half a period {half_period}",
            hi - lo
        )));
    }

    let w2 = 2.0 * angular_frequency;
    let rows: Vec<[f64; 3]> = times
        .iter()
        .map(|&t| {
            let (s, c) = (w2 * t).sin_cos();
            [1.0, c, s]
        })
        .collect();
    let mut gram = [[0.0; 3]; 3];
    let mut rhs = [0.0; 3];
    for (r, &y) in rows.iter().zip(signal) {
        for i in 0..3 {
            rhs[i] += r[i] * y;
            for j in 0..3 {
                gram[i][j] += r[i] * r[j];
            }
        }
    }
    let scale: Vec<f64> = (0..3).map(|i| gram[i][i].sqrt()).collect();
    if scale.iter().any(|&s| s == 0.0) {
        return Err(Error::DegenerateFit(
            "a basis function vanishes on every sample (aliased sampling)".into(),
        ));
    }
    let mut normalized = gram;
    for (i, row) in normalized.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v /= scale[i] * scale[j];
        }
    }
    let det = det3(&normalized);
    if det < GRAM_FLOOR {
        return Err(Error::DegenerateFit(format!(
            "sample grid cannot separate the phase quadratures (Gram determinant {det:e})"
        )));
    }
    let c = solve3(&gram, &rhs, det3(&gram));

    let half = c[1].hypot(c[2]);
    let amplitude = 2.0 * half;
    let peak = signal.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if peak == 0.0 || amplitude <= CONTRAST_FLOOR * peak {
        return Err(Error::DegenerateFit(format!(
            "signal has no modulation at ω = {angular_frequency} (A = {amplitude:e})"
        )));
    }
    let mut phase = (0.5 * (-c[2]).atan2(c[1])).rem_euclid(PI);
    if phase >= PI {
        phase = 0.0;
    }
    let offset = c[0] - half;

    let sq: f64 = rows
        .iter()
        .zip(signal)
        .map(|(r, &y)| {
            let model = c[0] + c[1] * r[1] + c[2] * r[2];
            (y - model).powi(2)
        })
        .sum();
    Ok(PhaseFit { phase, amplitude, offset, residual: (sq / signal.len() as f64).sqrt() })
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Cramer's rule; the caller has already ruled out a singular matrix.
fn solve3(m: &[[f64; 3]; 3], b: &[f64; 3], det: f64) -> [f64; 3] {
    let mut out = [0.0; 3];
    for (k, o) in out.iter_mut().enumerate() {
        let mut mk = *m;
        for i in 0..3 {
            mk[i][k] = b[i];
        }
        *o = det3(&mk) / det;
    }
    out
}
