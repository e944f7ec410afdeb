//! Plane-wave states on the momentum ladder `|κ + 2p⟩`.

use num_complex::Complex64;

use crate::error::{ensure_finite, Error, Result};

/// Tolerance on `Σ|a_p|² = 1` accepted at construction.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Complex amplitudes `a_p` on the orders `p_min..=p_max` at fixed
/// pseudo-momentum `κ ∈ (-1, 1]`.
///
/// The paper-style labels `|0⟩` and `|±2⟩` at `κ = 0` are the orders
/// `p = 0` and `p = ±1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneWaveState {
    kappa: f64,
    p_min: i32,
    amplitudes: Vec<Complex64>,
}

pub(crate) fn check_kappa(kappa: f64) -> Result<()> {
    ensure_finite("kappa", kappa)?;
    if kappa <= -1.0 || kappa > 1.0 {
        return Err(Error::invalid(format!(
            "pseudo-momentum must lie in (-1, 1], got {kappa}"
        )));
    }
    Ok(())
}

impl PlaneWaveState {
    /// Build a normalized state. `amplitudes[i]` is the amplitude of order `p_min + i`.
    pub fn new(kappa: f64, p_min: i32, amplitudes: Vec<Complex64>) -> Result<Self> {
        let state = Self::from_parts(kappa, p_min, amplitudes)?;
        let dev = (state.norm_sqr() - 1.0).abs();
        if dev > NORM_TOLERANCE {
            return Err(Error::invalid(format!(
                "state is not normalized: |1 - Σ|a_p|²| = {dev:e}"
            )));
        }
        Ok(state)
    }

    /// Build a state and rescale it to unit norm.
    pub fn normalized(kappa: f64, p_min: i32, amplitudes: Vec<Complex64>) -> Result<Self> {
        let mut state = Self::from_parts(kappa, p_min, amplitudes)?;
        let norm = state.norm_sqr().sqrt();
        if norm == 0.0 {
            return Err(Error::invalid("cannot normalize the zero vector"));
        }
        state.amplitudes.iter_mut().for_each(|a| *a /= norm);
        Ok(state)
    }

    fn from_parts(kappa: f64, p_min: i32, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_kappa(kappa)?;
        if amplitudes.is_empty() {
            return Err(Error::invalid("a state needs at least one order"));
        }
        let p_max = p_min + amplitudes.len() as i32 - 1;
        if p_min > 0 || p_max < 0 {
            return Err(Error::invalid(format!(
                "order range [{p_min}, {p_max}] must contain p = 0"
            )));
        }
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::invalid("amplitudes must be finite"));
        }
        Ok(Self { kappa, p_min, amplitudes })
    }

    /// Single plane wave `|κ + 2p⟩` embedded in the orders `-span..=span`.
    pub fn basis(kappa: f64, p: i32, span: usize) -> Result<Self> {
        let span = span as i32;
        if p.abs() > span {
            return Err(Error::invalid(format!("order {p} lies outside ±{span}")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); (2 * span + 1) as usize];
        amps[(p + span) as usize] = Complex64::new(1.0, 0.0);
        Self::new(kappa, -span, amps)
    }

    pub(crate) fn from_raw(kappa: f64, p_min: i32, amplitudes: Vec<Complex64>) -> Self {
        Self { kappa, p_min, amplitudes }
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn p_min(&self) -> i32 {
        self.p_min
    }

    pub fn p_max(&self) -> i32 {
        self.p_min + self.amplitudes.len() as i32 - 1
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    /// Amplitudes in order of increasing `p`.
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    /// Amplitude of order `p`, zero outside the stored range.
    pub fn amplitude(&self, p: i32) -> Complex64 {
        if p < self.p_min || p > self.p_max() {
            Complex64::new(0.0, 0.0)
        } else {
            self.amplitudes[(p - self.p_min) as usize]
        }
    }

    pub fn population(&self, p: i32) -> f64 {
        self.amplitude(p).norm_sqr()
    }

    /// `(p, a_p)` pairs in order of increasing `p`.
    pub fn iter(&self) -> impl Iterator<Item = (i32, Complex64)> + '_ {
        self.amplitudes
            .iter()
            .enumerate()
            .map(move |(i, a)| (self.p_min + i as i32, *a))
    }

    /// Kinetic energy `(κ + 2p)²` of order `p`.
    pub fn kinetic_energy(&self, p: i32) -> f64 {
        let k = self.kappa + 2.0 * p as f64;
        k * k
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Same state on the wider order range `[p_min, p_max]`, zero-padded.
    pub fn padded(&self, p_min: i32, p_max: i32) -> Self {
        let lo = p_min.min(self.p_min);
        let hi = p_max.max(self.p_max());
        let mut amps = vec![Complex64::new(0.0, 0.0); (hi - lo + 1) as usize];
        let offset = (self.p_min - lo) as usize;
        amps[offset..offset + self.amplitudes.len()].copy_from_slice(&self.amplitudes);
        Self { kappa: self.kappa, p_min: lo, amplitudes: amps }
    }

    /// Inner product `⟨self|other⟩` over the union of the two order ranges.
    pub fn inner(&self, other: &PlaneWaveState) -> Complex64 {
        let lo = self.p_min.max(other.p_min);
        let hi = self.p_max().min(other.p_max());
        (lo..=hi)
            .map(|p| self.amplitude(p).conj() * other.amplitude(p))
            .sum()
    }

    /// Largest `|a_p - b_p|` over the union of the two order ranges.
    pub fn max_abs_diff(&self, other: &PlaneWaveState) -> f64 {
        let lo = self.p_min.min(other.p_min);
        let hi = self.p_max().max(other.p_max());
        (lo..=hi)
            .map(|p| (self.amplitude(p) - other.amplitude(p)).norm())
            .fold(0.0, f64::max)
    }
}
