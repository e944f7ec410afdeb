use rayon::prelude::*;

use super::{build_hamiltonian, eigensystem};
use crate::error::{ensure_finite, Error, Result};

/// Lowest Bloch energies `ε(κ, band)` on a uniform grid over `(-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandStructure {
    pub q: f64,
    pub kappa_grid: Vec<f64>,
    /// `energies[i][band]` at `kappa_grid[i]`, ascending in `band`.
    pub energies: Vec<Vec<f64>>,
}

impl BandStructure {
    pub fn n_bands(&self) -> usize {
        self.energies.first().map_or(0, Vec::len)
    }

    pub fn energy(&self, kappa_index: usize, band: usize) -> f64 {
        self.energies[kappa_index][band]
    }

    /// `(κ, band, ε)` rows in grid order.
    pub fn rows(&self) -> impl Iterator<Item = (f64, usize, f64)> + '_ {
        self.kappa_grid.iter().zip(&self.energies).flat_map(|(&k, e)| {
            e.iter().enumerate().map(move |(b, &v)| (k, b, v))
        })
    }
}

/// Uniform grid of `n` points over the first zone: `κ = 1` included, `κ = -1` excluded.
pub fn kappa_grid(n: usize) -> Vec<f64> {
    (1..=n).map(|j| -1.0 + 2.0 * j as f64 / n as f64).collect()
}

/// Preconditions of [`band_structure`], checked without computing anything.
pub fn check_band_request(q: f64, n_kappa: usize, n_bands: usize, p_span: usize) -> Result<()> {
    build_hamiltonian(1.0, q, p_span)?;
    if n_kappa < 2 {
        return Err(Error::invalid(format!("n_kappa must be at least 2, got {n_kappa}")));
    }
    if n_bands == 0 || n_bands > 2 * p_span {
        return Err(Error::invalid(format!(
            "n_bands must lie in 1..={} for p_span = {p_span}, got {n_bands}",
            2 * p_span
        )));
    }
    Ok(())
}

/// Band energies of the standing-wave lattice with coupling `q`.
pub fn band_structure(q: f64, n_kappa: usize, n_bands: usize, p_span: usize) -> Result<BandStructure> {
    check_band_request(q, n_kappa, n_bands, p_span)?;
    let grid = kappa_grid(n_kappa);
    let energies = grid
        .par_iter()
        .map(|&kappa| {
            let h = build_hamiltonian(kappa, q, p_span)?;
            let mut values = eigensystem(&h)?.values;
            values.truncate(n_bands);
            Ok(values)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BandStructure { q, kappa_grid: grid, energies })
}

/// Ground Bloch energy at `κ = 0`, with the basis enlarged until the value
/// changes by less than 1e-12.
pub fn ground_energy_shift(q: f64) -> Result<f64> {
    ensure_finite("q", q)?;
    if q < 0.0 {
        return Err(Error::invalid(format!("q must be non-negative, got {q}")));
    }
    let lowest = |span: usize| -> Result<f64> {
        Ok(eigensystem(&build_hamiltonian(0.0, q, span)?)?.values[0])
    };
    let mut span = crate::default_p_span(q);
    let mut prev = lowest(span)?;
    for _ in 0..64 {
        span += 4;
        let next = lowest(span)?;
        if (next - prev).abs() < 1e-12 {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::NonConvergence(format!(
        "ground energy at q = {q} still changing at p_span = {span}"
    )))
}
