//! Unitary time integration of
//!
//! ```text
//! i ∂Ψ/∂τ = -∂²Ψ/∂X² + q(τ) (e^{2iX} + e^{-2iX}) Ψ
//! ```
//!
//! on the truncated ladder `|κ + 2p⟩`.
//!
//! One step of length `h` is the symmetric split
//!
//! ```text
//! ψ' = e^{-iDh/2} · C(q(τ + h/2)) · e^{-iDh/2} ψ
//! ```
//!
//! where `D` is the kinetic diagonal `(κ + 2p)²` and `C(q)` is the Cayley
//! map `(1 + iVh/2)⁻¹(1 - iVh/2)` of the coupling `V = q(S + S†)`. Both
//! factors are exactly unitary and the kinetic factor is exact, so free
//! evolution and constant energy offsets carry no integration error.
//!
//! Step size is chosen a priori from the spectral span of the truncated
//! Hamiltonian, then checked by comparing against a run with half the step;
//! the step is halved until the estimated error meets the phase tolerance.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::envelope::PulseEnvelope;
use crate::error::{ensure_finite, Error, Result};
use crate::state::{PlaneWaveState, NORM_TOLERANCE};

/// Orders added on one side of the basis when population reaches its edge.
const GROWTH: i32 = 4;
/// Smallest step the step-halving loop may reach.
const MIN_STEP: f64 = 1e-12;
/// Largest number of steps spent on one segment before giving up.
const MAX_SEGMENT_STEPS: usize = 1 << 23;
/// Amplitudes below this magnitude are judged on absolute rather than phase error.
const AMPLITUDE_FLOOR: f64 = 1e-3;
/// Hard cap on the basis size.
const MAX_ORDERS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagationSettings {
    /// Target accuracy of every amplitude's phase, in radians.
    pub phase_tolerance: f64,
    /// Upper bound on the integration step.
    pub max_step: f64,
    /// Edge population that triggers basis growth.
    pub truncation_threshold: f64,
    /// Constant added to every diagonal element of the Hamiltonian. Only
    /// changes the global phase; kept for gauge checks.
    pub energy_offset: f64,
}

impl Default for PropagationSettings {
    fn default() -> Self {
        Self {
            phase_tolerance: 1e-3,
            max_step: 0.01,
            truncation_threshold: 1e-12,
            energy_offset: 0.0,
        }
    }
}

impl PropagationSettings {
    pub fn with_phase_tolerance(mut self, tol: f64) -> Self {
        self.phase_tolerance = tol;
        self
    }

    pub fn with_max_step(mut self, step: f64) -> Self {
        self.max_step = step;
        self
    }

    pub fn with_energy_offset(mut self, offset: f64) -> Self {
        self.energy_offset = offset;
        self
    }

    pub fn validate(&self) -> Result<()> {
        ensure_finite("phase tolerance", self.phase_tolerance)?;
        ensure_finite("max step", self.max_step)?;
        ensure_finite("energy offset", self.energy_offset)?;
        if self.phase_tolerance <= 0.0 {
            return Err(Error::invalid("phase tolerance must be positive"));
        }
        if self.max_step <= 0.0 {
            return Err(Error::invalid("max step must be positive"));
        }
        if !(self.truncation_threshold > 0.0 && self.truncation_threshold <= 1e-6) {
            return Err(Error::invalid(format!(
                "truncation threshold must lie in (0, 1e-6], got {}",
                self.truncation_threshold
            )));
        }
        Ok(())
    }
}

/// One line of a diffraction read-out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumLine {
    pub order: i32,
    pub population: f64,
    /// `arg(a_p)` in `(-π, π]`.
    pub phase: f64,
}

/// Populations and phases of every order in the basis.
pub fn diffraction_spectrum(state: &PlaneWaveState) -> Vec<SpectrumLine> {
    state
        .iter()
        .map(|(order, a)| SpectrumLine {
            order,
            population: a.norm_sqr(),
            phase: principal_phase(a.arg()),
        })
        .collect()
}

/// Map an angle onto `(-π, π]`.
///
/// Angles within 1e-12 of the cut are reported as `+π`, so a phase of `π`
/// that picked up roundoff does not flip sign.
pub fn principal_phase(phi: f64) -> f64 {
    let r = phi.rem_euclid(2.0 * PI);
    if r > PI + BRANCH_CUT_SLACK {
        r - 2.0 * PI
    } else {
        r.min(PI)
    }
}

const BRANCH_CUT_SLACK: f64 = 1e-12;

/// Exact free evolution: `a_p → exp(-i(κ + 2p)² Δτ) a_p`.
pub fn free_propagate(state: &PlaneWaveState, dtau: f64) -> Result<PlaneWaveState> {
    ensure_finite("free-flight duration", dtau)?;
    if dtau < 0.0 {
        return Err(Error::invalid(format!(
            "free-flight duration must be non-negative, got {dtau}"
        )));
    }
    let mut out = state.clone();
    let p_min = out.p_min();
    let kappa = out.kappa();
    for (i, a) in out.amplitudes_mut().iter_mut().enumerate() {
        let k = kappa + 2.0 * (p_min + i as i32) as f64;
        *a *= Complex64::from_polar(1.0, -k * k * dtau);
    }
    Ok(out)
}

/// Evolve `state` from `tau_a` to `tau_b` under the envelope `env`.
pub fn propagate(
    state: &PlaneWaveState,
    env: &PulseEnvelope,
    tau_a: f64,
    tau_b: f64,
    settings: &PropagationSettings,
) -> Result<PlaneWaveState> {
    settings.validate()?;
    ensure_finite("start time", tau_a)?;
    ensure_finite("end time", tau_b)?;
    if tau_b < tau_a {
        return Err(Error::invalid(format!(
            "end time {tau_b} precedes start time {tau_a}"
        )));
    }
    check_normalized(state)?;

    let (sup_a, sup_b) = env.support();
    let mut cuts = vec![tau_a];
    cuts.extend(env.breakpoints().into_iter().filter(|&t| t > tau_a && t < tau_b));
    cuts.push(tau_b);
    cuts.dedup();

    let mut current = state.clone();
    for w in cuts.windows(2) {
        let (s0, s1) = (w[0], w[1]);
        if s1 <= s0 {
            continue;
        }
        if env.is_off() || s1 <= sup_a || s0 >= sup_b {
            current = free_propagate(&current, s1 - s0)?;
            if settings.energy_offset != 0.0 {
                let g = Complex64::from_polar(1.0, -settings.energy_offset * (s1 - s0));
                current.amplitudes_mut().iter_mut().for_each(|a| *a *= g);
            }
        } else {
            current = integrate_segment(&current, env, s0, s1, settings)?;
        }
    }
    Ok(current)
}

/// Evolve with exactly `n_steps` equal steps and no error control.
///
/// Basis growth still applies. No renormalization is performed, so the
/// result exposes the raw roundoff of the one-step map.
pub fn propagate_fixed_steps(
    state: &PlaneWaveState,
    env: &PulseEnvelope,
    tau_a: f64,
    tau_b: f64,
    n_steps: usize,
    settings: &PropagationSettings,
) -> Result<PlaneWaveState> {
    settings.validate()?;
    if n_steps == 0 {
        return Err(Error::invalid("n_steps must be at least 1"));
    }
    if tau_b < tau_a {
        return Err(Error::invalid(format!(
            "end time {tau_b} precedes start time {tau_a}"
        )));
    }
    let mut ladder = Ladder::new(state, settings);
    ladder.ensure_margin()?;
    ladder.run(env, tau_a, tau_b, n_steps)?;
    Ok(ladder.into_state())
}

fn check_normalized(state: &PlaneWaveState) -> Result<()> {
    let dev = (state.norm_sqr() - 1.0).abs();
    if dev > NORM_TOLERANCE {
        return Err(Error::invalid(format!(
            "input state is not normalized: |1 - Σ|a_p|²| = {dev:e}"
        )));
    }
    Ok(())
}

fn integrate_segment(
    state: &PlaneWaveState,
    env: &PulseEnvelope,
    s0: f64,
    s1: f64,
    settings: &PropagationSettings,
) -> Result<PlaneWaveState> {
    let span = crate::default_p_span(env.q_max()) as i32;
    let padded = state.padded(-span, span);
    let len = s1 - s0;

    let mut start = Ladder::new(&padded, settings);
    start.ensure_margin()?;
    let bound = 1.0 / (1.0 + start.spectral_span(env.q_max()));
    let h0 = settings.max_step.min(bound);
    let mut n = (len / h0).ceil().max(1.0) as usize;

    let run = |n: usize| -> Result<Ladder> {
        let mut l = start.clone();
        l.run(env, s0, s1, n)?;
        Ok(l)
    };

    let mut coarse = run(n)?;
    loop {
        if len / ((2 * n) as f64) < MIN_STEP || 2 * n > MAX_SEGMENT_STEPS {
            return Err(Error::NonConvergence(format!(
                "{} steps on [{s0}, {s1}] did not meet phase tolerance {}",
                2 * n,
                settings.phase_tolerance
            )));
        }
        let fine = run(2 * n)?;
        let err = richardson_error(&coarse, &fine);
        if err <= settings.phase_tolerance {
            log::debug!("segment [{s0}, {s1}]: {} steps, error estimate {err:e}", 2 * n);
            let mut out = fine.into_state();
            let norm = out.norm_sqr().sqrt();
            out.amplitudes_mut().iter_mut().for_each(|a| *a /= norm);
            return Ok(out);
        }
        log::debug!("segment [{s0}, {s1}]: {} steps, error estimate {err:e}, halving", 2 * n);
        coarse = fine;
        n *= 2;
    }
}

/// Per-amplitude error estimate of the finer of two runs with steps `h` and `h/2`.
fn richardson_error(coarse: &Ladder, fine: &Ladder) -> f64 {
    let lo = coarse.p_min.min(fine.p_min);
    let hi = coarse.p_max().max(fine.p_max());
    (lo..=hi)
        .map(|p| {
            let a = fine.amplitude(p);
            let diff = (a - coarse.amplitude(p)).norm() / 3.0;
            diff / a.norm().max(AMPLITUDE_FLOOR)
        })
        .fold(0.0, f64::max)
}

/// Working state of the integrator.
#[derive(Debug, Clone)]
struct Ladder {
    kappa: f64,
    p_min: i32,
    amps: Vec<Complex64>,
    scratch: Vec<Complex64>,
    threshold: f64,
    offset: f64,
}

/// LU factors of `1 + β(S + S†)` for a fixed `β` and basis size.
struct CayleyFactors {
    beta: Complex64,
    upper: Vec<Complex64>,
    inv_pivot: Vec<Complex64>,
}

impl CayleyFactors {
    fn new(beta: Complex64, n: usize) -> Self {
        let one = Complex64::new(1.0, 0.0);
        let mut upper = Vec::with_capacity(n);
        let mut inv_pivot = Vec::with_capacity(n);
        let mut prev = Complex64::new(0.0, 0.0);
        for _ in 0..n {
            let pivot = one - beta * prev;
            let inv = one / pivot;
            prev = beta * inv;
            upper.push(prev);
            inv_pivot.push(inv);
        }
        Self { beta, upper, inv_pivot }
    }

    /// Overwrite `x` with `(1 + β(S + S†))⁻¹ (1 - β(S + S†)) x`, `β = ihq/2`.
    fn apply(&self, x: &mut [Complex64], rhs: &mut [Complex64]) {
        let n = x.len();
        let b = self.beta;
        for j in 0..n {
            let mut nb = Complex64::new(0.0, 0.0);
            if j > 0 {
                nb += x[j - 1];
            }
            if j + 1 < n {
                nb += x[j + 1];
            }
            rhs[j] = x[j] - b * nb;
        }
        // forward sweep
        let mut prev = Complex64::new(0.0, 0.0);
        for j in 0..n {
            prev = (rhs[j] - b * prev) * self.inv_pivot[j];
            rhs[j] = prev;
        }
        // back substitution
        x[n - 1] = rhs[n - 1];
        for j in (0..n - 1).rev() {
            x[j] = rhs[j] - self.upper[j] * x[j + 1];
        }
    }
}

impl Ladder {
    fn new(state: &PlaneWaveState, settings: &PropagationSettings) -> Self {
        Self {
            kappa: state.kappa(),
            p_min: state.p_min(),
            amps: state.amplitudes().to_vec(),
            scratch: vec![Complex64::new(0.0, 0.0); state.len()],
            threshold: settings.truncation_threshold,
            offset: settings.energy_offset,
        }
    }

    fn p_max(&self) -> i32 {
        self.p_min + self.amps.len() as i32 - 1
    }

    fn amplitude(&self, p: i32) -> Complex64 {
        if p < self.p_min || p > self.p_max() {
            Complex64::new(0.0, 0.0)
        } else {
            self.amps[(p - self.p_min) as usize]
        }
    }

    fn energy(&self, i: usize) -> f64 {
        let k = self.kappa + 2.0 * (self.p_min + i as i32) as f64;
        k * k + self.offset
    }

    /// Gershgorin bound on the spread of the eigenvalues for coupling up to `q`.
    fn spectral_span(&self, q: f64) -> f64 {
        let (lo, hi) = (0..self.amps.len())
            .map(|i| self.energy(i))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), e| (lo.min(e), hi.max(e)));
        hi - lo + 4.0 * q
    }

    fn edge_populations(&self) -> (f64, f64) {
        let n = self.amps.len();
        (self.amps[0].norm_sqr(), self.amps[n - 1].norm_sqr())
    }

    /// Grow the basis until neither edge holds significant population.
    /// Returns true if the basis changed.
    fn ensure_margin(&mut self) -> Result<bool> {
        let mut grew = false;
        loop {
            let (lo, hi) = self.edge_populations();
            if lo + hi <= self.threshold {
                return Ok(grew);
            }
            let (grow_lo, grow_hi) = if self.amps.len() == 1 {
                (true, true)
            } else {
                (lo > 0.5 * self.threshold, hi > 0.5 * self.threshold)
            };
            self.grow(grow_lo, grow_hi)?;
            grew = true;
        }
    }

    fn grow(&mut self, lower: bool, upper: bool) -> Result<()> {
        let zero = Complex64::new(0.0, 0.0);
        if lower {
            let mut amps = vec![zero; GROWTH as usize];
            amps.extend_from_slice(&self.amps);
            self.amps = amps;
            self.p_min -= GROWTH;
        }
        if upper {
            self.amps.extend(std::iter::repeat_n(zero, GROWTH as usize));
        }
        if self.amps.len() > MAX_ORDERS {
            return Err(Error::NonConvergence(format!(
                "basis grew beyond {MAX_ORDERS} orders"
            )));
        }
        self.scratch.resize(self.amps.len(), zero);
        Ok(())
    }

    fn half_phases(&self, h: f64) -> Vec<Complex64> {
        (0..self.amps.len())
            .map(|i| Complex64::from_polar(1.0, -0.5 * h * self.energy(i)))
            .collect()
    }

    fn run(&mut self, env: &PulseEnvelope, t0: f64, t1: f64, n: usize) -> Result<()> {
        let h = (t1 - t0) / n as f64;
        let mut phases = self.half_phases(h);
        let mut factors: Option<CayleyFactors> = None;
        let mut saved = self.amps.clone();
        let mut k = 0;
        while k < n {
            let q = env.value(t0 + (k as f64 + 0.5) * h);
            let beta = Complex64::new(0.0, 0.5 * h * q);
            let stale = factors
                .as_ref()
                .is_none_or(|f| f.beta != beta || f.upper.len() != self.amps.len());
            if stale {
                factors = Some(CayleyFactors::new(beta, self.amps.len()));
            }
            saved.clear();
            saved.extend_from_slice(&self.amps);

            for (a, ph) in self.amps.iter_mut().zip(&phases) {
                *a *= ph;
            }
            if q != 0.0 {
                if let Some(f) = &factors {
                    f.apply(&mut self.amps, &mut self.scratch);
                }
            }
            for (a, ph) in self.amps.iter_mut().zip(&phases) {
                *a *= ph;
            }

            let (lo, hi) = self.edge_populations();
            if lo + hi > self.threshold {
                self.amps.clear();
                self.amps.extend_from_slice(&saved);
                let grow_lo = lo > 0.5 * self.threshold;
                let grow_hi = hi > 0.5 * self.threshold;
                self.grow(grow_lo || !grow_hi, grow_hi || !grow_lo)?;
                phases = self.half_phases(h);
                factors = None;
                continue;
            }
            k += 1;
        }
        Ok(())
    }

    fn into_state(self) -> PlaneWaveState {
        PlaneWaveState::from_raw(self.kappa, self.p_min, self.amps)
    }
}
