//! JSON run configurations. Every document names its subcommand in a
//! `"command"` field; unknown keys anywhere are rejected.

use std::path::Path;

use mattersim::analytic::PulseShape;
use mattersim::envelope::PulseEnvelope;
use mattersim::interferometer::{
    DetectionWindow, FirstPulse, InterferometerConfig, SimulationMode,
};
use mattersim::propagator::PropagationSettings;
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum RunConfig {
    Bands(BandsConfig),
    Diffract(DiffractConfig),
    Interferometer(InterferometerSpec),
    Sensitivity(SensitivitySpec),
    DesignPulse(DesignPulseConfig),
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn command(&self) -> &'static str {
        match self {
            RunConfig::Bands(_) => "bands",
            RunConfig::Diffract(_) => "diffract",
            RunConfig::Interferometer(_) => "interferometer",
            RunConfig::Sensitivity(_) => "sensitivity",
            RunConfig::DesignPulse(_) => "design-pulse",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Analytic,
    Numeric,
}

impl From<Mode> for SimulationMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Analytic => SimulationMode::Analytic,
            Mode::Numeric => SimulationMode::Numeric,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BandsConfig {
    pub q: f64,
    pub n_kappa: usize,
    pub n_bands: usize,
    #[serde(default)]
    pub p_span: Option<usize>,
}

impl BandsConfig {
    pub fn p_span(&self) -> usize {
        self.p_span.unwrap_or_else(|| mattersim::default_p_span(self.q).max(self.n_bands))
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase", deny_unknown_fields)]
pub enum EnvelopeSpec {
    Rectangular { q_max: f64, start: f64, end: f64 },
    Gaussian { q_max: f64, center: f64, sigma: f64 },
    Tabulated { samples: Vec<(f64, f64)> },
}

impl EnvelopeSpec {
    pub fn build(&self) -> Result<PulseEnvelope, CliError> {
        Ok(match self {
            EnvelopeSpec::Rectangular { q_max, start, end } => {
                PulseEnvelope::rectangular(*q_max, *start, *end)?
            }
            EnvelopeSpec::Gaussian { q_max, center, sigma } => {
                PulseEnvelope::gaussian(*q_max, *center, *sigma)?
            }
            EnvelopeSpec::Tabulated { samples } => PulseEnvelope::tabulated(samples.clone())?,
        })
    }
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SettingsSpec {
    pub phase_tolerance: Option<f64>,
    pub max_step: Option<f64>,
    pub truncation_threshold: Option<f64>,
}

impl SettingsSpec {
    pub fn build(&self) -> Result<PropagationSettings, CliError> {
        let mut s = PropagationSettings::default();
        if let Some(v) = self.phase_tolerance {
            s.phase_tolerance = v;
        }
        if let Some(v) = self.max_step {
            s.max_step = v;
        }
        if let Some(v) = self.truncation_threshold {
            s.truncation_threshold = v;
        }
        s.validate()?;
        Ok(s)
    }
}

/// Closed-form model used by `diffract` in analytic mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnalyticModel {
    /// Thin grating of area `γ = 2∫q dτ`.
    #[default]
    RamanNath,
    /// Second-order Bragg map.
    Bragg,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiffractConfig {
    pub envelope: EnvelopeSpec,
    #[serde(default)]
    pub initial_order: i32,
    #[serde(default)]
    pub kappa: f64,
    #[serde(default)]
    pub model: AnalyticModel,
    /// End of the numeric run; defaults to the end of the envelope support.
    #[serde(default)]
    pub until: Option<f64>,
    #[serde(default)]
    pub mode: Option<Mode>,
    #[serde(default)]
    pub settings: SettingsSpec,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum FirstPulseSpec {
    Instantaneous { gamma: f64 },
    Envelope { envelope: EnvelopeSpec },
}

/// Bragg π pulse centred at the mirror time. `q_max` overrides the
/// designed π-pulse coupling.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase", deny_unknown_fields)]
pub enum BraggSpec {
    Rectangular { duration: f64, q_max: Option<f64> },
    Gaussian { sigma: f64, q_max: Option<f64> },
    Tabulated { profile: Vec<(f64, f64)>, q_max: Option<f64> },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectionSpec {
    pub start: f64,
    pub end: f64,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_samples() -> usize {
    mattersim::interferometer::DEFAULT_SAMPLES
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum Preset {
    #[serde(rename = "mit-2002")]
    Mit2002,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterferometerSpec {
    #[serde(default)]
    pub preset: Option<Preset>,
    #[serde(default)]
    pub first_pulse: Option<FirstPulseSpec>,
    #[serde(default)]
    pub mirror_time: Option<f64>,
    #[serde(default)]
    pub bragg: Option<BraggSpec>,
    #[serde(default)]
    pub detection: Option<DetectionSpec>,
    #[serde(default)]
    pub power_scale: Option<f64>,
    #[serde(default)]
    pub mode: Option<Mode>,
    #[serde(default)]
    pub settings: SettingsSpec,
}

impl InterferometerSpec {
    pub fn build(&self, mode_flag: Option<Mode>) -> Result<InterferometerConfig, CliError> {
        let mode: SimulationMode = mode_flag.or(self.mode).unwrap_or(Mode::Analytic).into();
        let mut config = match self.preset {
            Some(Preset::Mit2002) => {
                if self.first_pulse.is_some() || self.mirror_time.is_some() || self.bragg.is_some()
                {
                    return Err(CliError::Config(
                        "preset cannot be combined with first_pulse, mirror_time or bragg".into(),
                    ));
                }
                InterferometerConfig::mit_2002(mode)?
            }
            None => {
                let missing = |k: &str| CliError::Config(format!("missing field `{k}`"));
                let first = match self.first_pulse.as_ref().ok_or_else(|| missing("first_pulse"))? {
                    FirstPulseSpec::Instantaneous { gamma } => {
                        FirstPulse::Instantaneous { gamma: *gamma }
                    }
                    FirstPulseSpec::Envelope { envelope } => FirstPulse::Envelope(envelope.build()?),
                };
                let t = self.mirror_time.ok_or_else(|| missing("mirror_time"))?;
                let bragg = self.bragg.as_ref().ok_or_else(|| missing("bragg"))?;
                let (shape, q_max) = match bragg {
                    BraggSpec::Rectangular { duration, q_max } => {
                        (PulseShape::Rectangular { duration: *duration }, *q_max)
                    }
                    BraggSpec::Gaussian { sigma, q_max } => {
                        (PulseShape::Gaussian { sigma: *sigma }, *q_max)
                    }
                    BraggSpec::Tabulated { profile, q_max } => {
                        (PulseShape::Tabulated { profile: profile.clone() }, *q_max)
                    }
                };
                let mut c = InterferometerConfig::with_pi_pulse(first, t, &shape, mode)?;
                if let Some(q) = q_max {
                    if !(q.is_finite() && q > 0.0) {
                        return Err(CliError::Config(format!("bragg q_max must be positive, got {q}")));
                    }
                    c.bragg = c.bragg.scaled(q / c.bragg.q_max())?;
                }
                c
            }
        };
        if let Some(d) = self.detection {
            config.detection = DetectionWindow { start: d.start, end: d.end, samples: d.samples };
        }
        if let Some(eps) = self.power_scale {
            config.power_scale = eps;
        }
        config.settings = self.settings.build()?;
        config.validate()?;
        Ok(config)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensitivitySpec {
    pub interferometer: InterferometerSpec,
    pub epsilons: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase", deny_unknown_fields)]
pub enum DesignPulseConfig {
    Rectangular { duration: f64 },
    Gaussian { sigma: f64 },
    Tabulated { profile: Vec<(f64, f64)> },
}

impl DesignPulseConfig {
    pub fn shape(&self) -> PulseShape {
        match self {
            DesignPulseConfig::Rectangular { duration } => {
                PulseShape::Rectangular { duration: *duration }
            }
            DesignPulseConfig::Gaussian { sigma } => PulseShape::Gaussian { sigma: *sigma },
            DesignPulseConfig::Tabulated { profile } => {
                PulseShape::Tabulated { profile: profile.clone() }
            }
        }
    }
}
