//! Phase shifts of atomic matter waves diffracted by a standing light wave.
//!
//! Everything is expressed in reduced units: energies in recoil energies
//! `ħω_rec`, time `τ = ω_rec t`, position `X = k_L x` and momentum
//! `κ = k_x / k_L`. The atom-light coupling is the dimensionless `q(τ)`,
//! a quarter of the light-shift amplitude, and the Hamiltonian at fixed
//! pseudo-momentum `κ` is tridiagonal on the plane-wave ladder `|κ + 2p⟩`:
//!
//! ```text
//! ⟨p|H|p⟩ = (κ + 2p)²,   ⟨p|H|p ± 1⟩ = q(τ)
//! ```
//!
//! The crate is organised bottom-up:
//!
//! * [`units`], [`envelope`], [`state`]: reduced units, pulse envelopes and
//!   the plane-wave state shared by every other module.
//! * [`bloch`]: the fixed-`κ` Hamiltonian, a tridiagonal eigensolver and the
//!   Bloch band structure.
//! * [`propagator`]: unitary integration of the time-dependent problem.
//! * [`analytic`]: closed-form Raman-Nath and second-order Bragg models.
//! * [`interferometer`]: the three-path contrast interferometer and its
//!   sensitivity to laser power.

pub mod analytic;
pub mod bloch;
pub mod envelope;
mod error;
pub mod interferometer;
pub mod propagator;
pub mod state;
pub mod units;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Default number of plane-wave orders on each side of `p = 0` for a coupling `q`.
///
/// Populations decay super-exponentially beyond `|p| ≈ 2√q`, so a fixed
/// margin above that is enough for every regime handled here.
pub fn default_p_span(q: f64) -> usize {
    let reach = (2.0 * q.max(0.0).sqrt()).ceil() as usize;
    (reach + 6).max(8)
}
