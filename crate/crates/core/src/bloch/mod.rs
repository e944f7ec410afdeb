//! Bloch states of an atom in a standing light wave.
//!
//! At fixed pseudo-momentum `κ` the Hamiltonian is tridiagonal in the
//! plane-wave basis, so the band structure comes from a sequence of small
//! symmetric tridiagonal eigenproblems.

mod bands;
mod eigen;

pub use bands::{band_structure, check_band_request, ground_energy_shift, kappa_grid, BandStructure};
pub use eigen::{eigensystem, tridiagonal_eigensystem, Eigensystem};

use crate::error::{ensure_finite, Error, Result};
use crate::state::check_kappa;

/// Hamiltonian `⟨p|H|p⟩ = (κ + 2p)²`, `⟨p|H|p ± 1⟩ = q` on the orders
/// `-p_span..=p_span`.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalHamiltonian {
    kappa: f64,
    q: f64,
    p_min: i32,
    diagonal: Vec<f64>,
}

/// Build the fixed-`κ` Hamiltonian. `κ` must already be folded into `(-1, 1]`.
pub fn build_hamiltonian(kappa: f64, q: f64, p_span: usize) -> Result<TridiagonalHamiltonian> {
    check_kappa(kappa)?;
    ensure_finite("q", q)?;
    if q < 0.0 {
        return Err(Error::invalid(format!("q must be non-negative, got {q}")));
    }
    if p_span < 1 {
        return Err(Error::invalid("p_span must be at least 1"));
    }
    let span = p_span as i32;
    let diagonal = (-span..=span)
        .map(|p| {
            let k = kappa + 2.0 * p as f64;
            k * k
        })
        .collect();
    Ok(TridiagonalHamiltonian { kappa, q, p_min: -span, diagonal })
}

impl TridiagonalHamiltonian {
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn p_min(&self) -> i32 {
        self.p_min
    }

    pub fn p_max(&self) -> i32 {
        self.p_min + self.diagonal.len() as i32 - 1
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    /// The uniform off-diagonal element.
    pub fn off_diagonal(&self) -> f64 {
        self.q
    }

    /// `H v`.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.dim();
        assert_eq!(v.len(), n, "vector length must match the basis size");
        (0..n)
            .map(|i| {
                let mut acc = self.diagonal[i] * v[i];
                if i > 0 {
                    acc += self.q * v[i - 1];
                }
                if i + 1 < n {
                    acc += self.q * v[i + 1];
                }
                acc
            })
            .collect()
    }
}
