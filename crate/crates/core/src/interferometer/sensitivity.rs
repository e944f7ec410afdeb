use std::f64::consts::PI;

use rayon::prelude::*;

use super::{simulate, InterferometerConfig};
use crate::analytic::rabi_phase;
use crate::error::{ensure_finite, Error, Result};

/// Largest accepted `|ε|`.
pub const MAX_POWER_OFFSET: f64 = 0.1;

/// `dΦ/dφ_r` counting only the light-shift part `4φ_r/3` of the relative phase.
pub const PAPER_MODE_PHASE_PER_RABI: f64 = 4.0 / 3.0;

/// `dΦ/dφ_r` of the full second-order model, `φ_r + φ_r/3 + φ_r/2`.
pub const EXACT_MODE_PHASE_PER_RABI: f64 = 11.0 / 6.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensitivityPoint {
    pub epsilon: f64,
    /// Fitted phase in `[0, π)`.
    pub phase: f64,
    /// Fitted phase made continuous across the scan.
    pub unwrapped: f64,
    pub amplitude: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityReport {
    /// One entry per input offset, in input order.
    pub points: Vec<SensitivityPoint>,
    /// Regression slope `dΦ/dε` of the simulated phases.
    pub slope: f64,
    /// `2 · (4/3) φ_r`, the light-shift-only accounting.
    pub paper_mode_slope: f64,
    /// `2 · (11/6) φ_r`, the derivative of the full second-order model.
    pub exact_mode_slope: f64,
}

/// Rerun the interferometer with the Bragg coupling scaled by `1 + ε` for
/// each `ε`, and regress the fitted phase against `ε`.
///
/// Since `φ_r ∝ q²`, a relative power offset `ε` moves `φ_r` by `2εφ_r` to
/// first order, which is where the factor 2 in the reference slopes comes
/// from. Phases are unwrapped in order of increasing `ε`, so neighbouring
/// offsets must move the phase by less than `π/2`.
pub fn power_sensitivity(
    config: &InterferometerConfig,
    epsilons: &[f64],
) -> Result<SensitivityReport> {
    if epsilons.is_empty() {
        return Err(Error::invalid("power scan needs at least one offset"));
    }
    for &e in epsilons {
        ensure_finite("power offset", e)?;
        if e.abs() > MAX_POWER_OFFSET {
            return Err(Error::invalid(format!(
                "power offset {e} exceeds ±{MAX_POWER_OFFSET}"
            )));
        }
    }
    config.validate()?;

    let fits = epsilons
        .par_iter()
        .map(|&e| {
            let mut c = config.clone();
            c.power_scale = e;
            simulate(&c)?.fit
        })
        .collect::<Result<Vec<_>>>()?;

    let mut order: Vec<usize> = (0..epsilons.len()).collect();
    order.sort_by(|&i, &j| epsilons[i].total_cmp(&epsilons[j]));
    let mut unwrapped = vec![0.0; epsilons.len()];
    let mut previous: Option<f64> = None;
    for &i in &order {
        let phi = fits[i].phase;
        let u = match previous {
            None => phi,
            Some(prev) => phi + PI * ((prev - phi) / PI).round(),
        };
        unwrapped[i] = u;
        previous = Some(u);
    }

    let points: Vec<SensitivityPoint> = epsilons
        .iter()
        .zip(&fits)
        .zip(&unwrapped)
        .map(|((&epsilon, f), &u)| SensitivityPoint {
            epsilon,
            phase: f.phase,
            unwrapped: u,
            amplitude: f.amplitude,
        })
        .collect();

    let rabi = rabi_phase(&config.bragg);
    Ok(SensitivityReport {
        slope: regression_slope(epsilons, &unwrapped),
        paper_mode_slope: 2.0 * PAPER_MODE_PHASE_PER_RABI * rabi,
        exact_mode_slope: 2.0 * EXACT_MODE_PHASE_PER_RABI * rabi,
        points,
    })
}

/// Least-squares slope; zero when every `x` is the same.
fn regression_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    if sxx == 0.0 {
        return 0.0;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    sxy / sxx
}
