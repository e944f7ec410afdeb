use num_complex::Complex64;

use super::bessel::{bessel_j_sequence, MAX_ORDER};
use crate::error::{ensure_finite, Error, Result};
use crate::state::PlaneWaveState;

/// Minimum captured weight `Σ_{|p| ≤ span} J_{|p|}(γ)²`.
const CAPTURE: f64 = 1.0 - 1e-10;

fn captured_weight(j: &[f64]) -> f64 {
    j[0] * j[0] + 2.0 * j[1..].iter().map(|v| v * v).sum::<f64>()
}

/// Thin-grating output `Σ_p (-i)^{|p|} J_{|p|}(γ) |2p⟩` at `κ = 0`,
/// truncated to `|p| ≤ p_span`.
///
/// Returns the state together with the norm deficit `1 - Σ_{|p| ≤ span} J_{|p|}²`
/// left by the truncation. The state itself is renormalized.
pub fn raman_nath_state(gamma: f64, p_span: usize) -> Result<(PlaneWaveState, f64)> {
    ensure_finite("pulse area", gamma)?;
    if gamma < 0.0 {
        return Err(Error::invalid(format!("pulse area must be non-negative, got {gamma}")));
    }
    if p_span > MAX_ORDER as usize {
        return Err(Error::invalid(format!("p_span {p_span} exceeds {MAX_ORDER}")));
    }
    let j = bessel_j_sequence(p_span as u32, gamma)?;
    let weight = captured_weight(&j);
    if weight < CAPTURE {
        return Err(Error::invalid(format!(
            "p_span = {p_span} captures only {weight:.12} of the population at γ = {gamma}; need {}",
            raman_nath_p_span(gamma)?
        )));
    }
    let span = p_span as i32;
    let amps = (-span..=span)
        .map(|p| {
            let n = p.unsigned_abs() as usize;
            phase_of_order(n) * j[n]
        })
        .collect();
    let state = PlaneWaveState::normalized(0.0, -span, amps)?;
    Ok((state, 1.0 - weight))
}

/// `(-i)^n`.
fn phase_of_order(n: usize) -> Complex64 {
    match n % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

/// Smallest order span that captures all but 1e-10 of the population.
pub fn raman_nath_p_span(gamma: f64) -> Result<usize> {
    ensure_finite("pulse area", gamma)?;
    if gamma < 0.0 {
        return Err(Error::invalid(format!("pulse area must be non-negative, got {gamma}")));
    }
    let j = bessel_j_sequence(MAX_ORDER, gamma)?;
    (1..=MAX_ORDER as usize)
        .find(|&s| captured_weight(&j[..=s]) >= CAPTURE)
        .ok_or_else(|| Error::invalid(format!("no span up to {MAX_ORDER} suffices at γ = {gamma}")))
}

/// Longest pulse `1/(4√q)` for which the thin-grating result holds.
pub fn raman_nath_validity_bound(q: f64) -> Result<f64> {
    ensure_finite("q", q)?;
    if q <= 0.0 {
        return Err(Error::invalid(format!(
            "the thin-grating bound needs q > 0, got {q}"
        )));
    }
    Ok(1.0 / (4.0 * q.sqrt()))
}
