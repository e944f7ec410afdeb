//! Three-path contrast interferometer.
//!
//! A thin-grating pulse at `τ ≈ 0` splits the atoms into the orders
//! `p ∈ {-1, 0, 1}`. A second-order Bragg π pulse centred at `τ = T` swaps
//! the moving orders, and near `τ = 2T` the three paths overlap into a
//! density grating `cos(2X)` whose amplitude beats at angular frequency 4.
//! The read-out is the homodyne signal `S(τ) = |c₂(τ)|²`.

mod fit;
mod sensitivity;

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::analytic::{
    bragg_apply, design_pi_pulse, raman_nath_p_span, raman_nath_state, PulseShape,
};
use crate::envelope::PulseEnvelope;
use crate::error::{ensure_finite, Error, Result};
use crate::propagator::{free_propagate, propagate, PropagationSettings};
use crate::state::PlaneWaveState;

pub use fit::{extract_phase, PhaseFit, MIN_SAMPLES};
pub use sensitivity::{
    power_sensitivity, SensitivityPoint, SensitivityReport, EXACT_MODE_PHASE_PER_RABI,
    MAX_POWER_OFFSET, PAPER_MODE_PHASE_PER_RABI,
};

/// Beat frequency of the grating amplitude, `(2²·1² - 0)` in recoil units.
pub const SIGNAL_ANGULAR_FREQUENCY: f64 = 4.0;

/// Signal phase `7π/3` before reduction mod π.
pub const SIGNAL_PHASE_UNWRAPPED: f64 = 7.0 * PI / 3.0;

/// Default number of detection samples.
pub const DEFAULT_SAMPLES: usize = 64;

/// `e^{2iX}` Fourier coefficient of the density, `c₂ = Σ_p a_{p+1} conj(a_p)`.
///
/// The `cos(2X)` modulation depth of the density is `2|c₂|`.
pub fn grating_amplitude(state: &PlaneWaveState) -> Complex64 {
    state
        .amplitudes()
        .windows(2)
        .map(|w| w[1] * w[0].conj())
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimulationMode {
    /// Instantaneous thin grating truncated to three orders, then the
    /// second-order Bragg map.
    Analytic,
    /// Full numerical integration through the physical envelopes.
    Numeric,
}

/// The splitting pulse.
#[derive(Debug, Clone, PartialEq)]
pub enum FirstPulse {
    /// Instantaneous thin-grating pulse of area `γ` at `τ = 0`.
    Instantaneous { gamma: f64 },
    /// A finite pulse. The analytic mode replaces it by an instantaneous
    /// one of area `γ = 2∫q dτ` at the centre of its support.
    Envelope(PulseEnvelope),
}

impl FirstPulse {
    pub fn gamma(&self) -> f64 {
        match self {
            FirstPulse::Instantaneous { gamma } => *gamma,
            FirstPulse::Envelope(env) => 2.0 * env.area(),
        }
    }

    /// Time after which the first pulse is over.
    pub fn end(&self) -> f64 {
        match self {
            FirstPulse::Instantaneous { .. } => 0.0,
            FirstPulse::Envelope(env) => env.support().1,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            FirstPulse::Instantaneous { gamma } => {
                ensure_finite("pulse area", *gamma)?;
                if *gamma < 0.0 {
                    return Err(Error::invalid(format!(
                        "pulse area must be non-negative, got {gamma}"
                    )));
                }
                Ok(())
            }
            FirstPulse::Envelope(env) => {
                if env.is_off() {
                    return Err(Error::invalid("the first pulse envelope is identically zero"));
                }
                Ok(())
            }
        }
    }
}

/// Detection times `start..=end` in `samples` equal steps, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionWindow {
    pub start: f64,
    pub end: f64,
    pub samples: usize,
}

impl DetectionWindow {
    /// One full signal period `π/4` starting at `start`.
    pub fn one_period(start: f64) -> Self {
        Self { start, end: start + PI / 4.0, samples: DEFAULT_SAMPLES }
    }

    pub fn times(&self) -> Vec<f64> {
        let step = (self.end - self.start) / (self.samples - 1) as f64;
        (0..self.samples).map(|i| self.start + step * i as f64).collect()
    }

    fn validate(&self) -> Result<()> {
        ensure_finite("detection start", self.start)?;
        ensure_finite("detection end", self.end)?;
        if self.samples < MIN_SAMPLES {
            return Err(Error::invalid(format!(
                "detection needs at least {MIN_SAMPLES} samples, got {}",
                self.samples
            )));
        }
        let half_period = PI / (2.0 * SIGNAL_ANGULAR_FREQUENCY);
        if self.end - self.start < half_period {
            return Err(Error::invalid(format!(
                "detection window [{}, {}] is shorter than half a signal period {half_period}",
                self.start, self.end
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterferometerConfig {
    pub first_pulse: FirstPulse,
    /// Mirror time `T`, the centre of the Bragg pulse.
    pub mirror_time: f64,
    /// Bragg pulse envelope, centred at `mirror_time`.
    pub bragg: PulseEnvelope,
    pub detection: DetectionWindow,
    pub mode: SimulationMode,
    /// Relative power offset `ε`; the Bragg coupling becomes `(1 + ε) q`.
    pub power_scale: f64,
    pub settings: PropagationSettings,
}

impl InterferometerConfig {
    /// Exact π pulse of the given shape centred at `T`, detection over one
    /// period from `2T`.
    pub fn with_pi_pulse(
        first_pulse: FirstPulse,
        mirror_time: f64,
        shape: &PulseShape,
        mode: SimulationMode,
    ) -> Result<Self> {
        ensure_finite("mirror time", mirror_time)?;
        let q = design_pi_pulse(shape)?;
        let bragg = match shape {
            PulseShape::Rectangular { duration } => PulseEnvelope::rectangular(
                q,
                mirror_time - 0.5 * duration,
                mirror_time + 0.5 * duration,
            )?,
            PulseShape::Gaussian { sigma } => PulseEnvelope::gaussian(q, mirror_time, *sigma)?,
            PulseShape::Tabulated { profile } => {
                let base = PulseEnvelope::tabulated(profile.clone())?;
                let (a, b) = base.support();
                base.scaled(q / base.q_max())?.shifted(mirror_time - 0.5 * (a + b))
            }
        };
        let config = Self {
            first_pulse,
            mirror_time,
            bragg,
            detection: DetectionWindow::one_period(2.0 * mirror_time),
            mode,
            power_scale: 0.0,
            settings: PropagationSettings::default(),
        };
        config.validate()?;
        Ok(config)
    }

    /// Parameters of the MIT contrast interferometer: a thin-grating pulse
    /// `q = 3.7` for `τ = 0.157` and a Gaussian Bragg π pulse with `σ = 0.6`.
    ///
    /// The Bragg pulse peaks near `q = 2.43`, well outside the range where
    /// the second-order model holds.
    pub fn mit_2002(mode: SimulationMode) -> Result<Self> {
        let first = FirstPulse::Envelope(PulseEnvelope::rectangular(3.7, 0.0, 0.157)?);
        let config = Self::with_pi_pulse(first, 40.0, &PulseShape::Gaussian { sigma: 0.6 }, mode)?;
        log::warn!(
            "mit-2002 preset: Bragg q_max = {:.4} is outside the second-order validity range",
            config.bragg.q_max()
        );
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        self.first_pulse.validate()?;
        ensure_finite("mirror time", self.mirror_time)?;
        if self.mirror_time <= 0.0 {
            return Err(Error::invalid(format!(
                "mirror time must be positive, got {}",
                self.mirror_time
            )));
        }
        ensure_finite("power offset", self.power_scale)?;
        if self.power_scale <= -1.0 {
            return Err(Error::invalid(format!(
                "power offset must exceed -1, got {}",
                self.power_scale
            )));
        }
        self.settings.validate()?;
        self.detection.validate()?;

        if self.bragg.is_off() {
            return Err(Error::invalid("the Bragg pulse envelope is identically zero"));
        }
        let (a, b) = self.bragg.support();
        let centre = 0.5 * (a + b);
        if (centre - self.mirror_time).abs() > 1e-9 * self.mirror_time.max(1.0) {
            return Err(Error::invalid(format!(
                "Bragg pulse is centred at {centre}, not at the mirror time {}",
                self.mirror_time
            )));
        }
        let split_end = self.first_pulse.end();
        if a <= split_end {
            return Err(Error::invalid(format!(
                "Bragg pulse starts at {a}, before the splitting pulse ends at {split_end}"
            )));
        }
        if self.detection.start < b {
            return Err(Error::invalid(format!(
                "detection starts at {}, before the Bragg pulse ends at {b}",
                self.detection.start
            )));
        }
        if split_end > 0.1 * self.mirror_time {
            log::warn!(
                "splitting pulse lasts until {split_end}, not short against T = {}",
                self.mirror_time
            );
        }
        Ok(())
    }

    /// The Bragg envelope with the power offset applied.
    pub fn scaled_bragg(&self) -> Result<PulseEnvelope> {
        self.bragg.scaled(1.0 + self.power_scale)
    }
}

/// Sampled homodyne signal and its fit.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalTrace {
    pub mode: SimulationMode,
    pub times: Vec<f64>,
    /// `S(τ) = |c₂(τ)|²`.
    pub signal: Vec<f64>,
    /// The fit, or the reason it failed. The raw trace is kept either way.
    pub fit: Result<PhaseFit>,
}

impl SignalTrace {
    pub fn phase(&self) -> Result<f64> {
        self.fit.clone().map(|f| f.phase)
    }
}

/// Run the interferometer and sample the signal over the detection window.
pub fn simulate(config: &InterferometerConfig) -> Result<SignalTrace> {
    config.validate()?;
    let bragg = config.scaled_bragg()?;
    let after_mirror = match config.mode {
        SimulationMode::Analytic => analytic_after_mirror(config, &bragg)?,
        SimulationMode::Numeric => numeric_after_mirror(config, &bragg)?,
    };
    let release = bragg.support().1;
    let times = config.detection.times();
    let signal = times
        .par_iter()
        .map(|&t| {
            let s = free_propagate(&after_mirror, t - release)?;
            Ok(grating_amplitude(&s).norm_sqr())
        })
        .collect::<Result<Vec<f64>>>()?;
    let fit = extract_phase(&times, &signal, SIGNAL_ANGULAR_FREQUENCY);
    if let Err(e) = &fit {
        log::warn!("signal fit failed: {e}");
    }
    Ok(SignalTrace { mode: config.mode, times, signal, fit })
}

/// State at the end of the Bragg pulse in the three-state model.
fn analytic_after_mirror(
    config: &InterferometerConfig,
    bragg: &PulseEnvelope,
) -> Result<PlaneWaveState> {
    let gamma = config.first_pulse.gamma();
    let split_at = match &config.first_pulse {
        FirstPulse::Instantaneous { .. } => 0.0,
        FirstPulse::Envelope(env) => {
            let (a, b) = env.support();
            0.5 * (a + b)
        }
    };
    let (full, _) = raman_nath_state(gamma, raman_nath_p_span(gamma)?)?;
    let three = PlaneWaveState::normalized(
        0.0,
        -1,
        (-1..=1).map(|p| full.amplitude(p)).collect(),
    )?;
    let (a, _) = bragg.support();
    let at_mirror = free_propagate(&three, a - split_at)?;
    bragg_apply(&at_mirror, bragg)
}

/// State at the end of the Bragg pulse from full integration.
fn numeric_after_mirror(
    config: &InterferometerConfig,
    bragg: &PulseEnvelope,
) -> Result<PlaneWaveState> {
    let set = &config.settings;
    let (split, t0) = match &config.first_pulse {
        FirstPulse::Instantaneous { gamma } => {
            (raman_nath_state(*gamma, raman_nath_p_span(*gamma)?)?.0, 0.0)
        }
        FirstPulse::Envelope(env) => {
            let (a, b) = env.support();
            let span = crate::default_p_span(env.q_max());
            let rest = PlaneWaveState::basis(0.0, 0, span)?;
            (propagate(&rest, env, a, b, set)?, b)
        }
    };
    let (a, b) = bragg.support();
    let at_mirror = free_propagate(&split, a - t0)?;
    propagate(&at_mirror, bragg, a, b, set)
}
