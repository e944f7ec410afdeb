use mattersim::analytic::{
    bragg_apply, design_pi_pulse, rabi_phase, raman_nath_p_span, raman_nath_state, PulseShape,
};
use mattersim::bloch::{band_structure, check_band_request};
use mattersim::envelope::PulseEnvelope;
use mattersim::interferometer::{
    power_sensitivity, simulate, InterferometerConfig, SensitivityReport, SignalTrace,
    SimulationMode, MAX_POWER_OFFSET,
};
use mattersim::propagator::{diffraction_spectrum, propagate};
use mattersim::state::PlaneWaveState;
use serde_json::{json, Value};

use crate::config::{
    AnalyticModel, BandsConfig, DesignPulseConfig, DiffractConfig, Mode, RunConfig,
    SensitivitySpec,
};
use crate::error::CliError;
use crate::output::{float_value, Cell, Table};

/// What a command produces, before it is rendered.
pub enum Report {
    Table(Table),
    Document(Value),
}

/// Rendered output plus an optional error to raise after writing it.
pub struct Outcome {
    pub report: Report,
    /// Short JSON summary echoed on stdout when the main output goes to a file.
    pub summary: Option<Value>,
    pub deferred: Option<CliError>,
}

impl Outcome {
    fn plain(report: Report) -> Self {
        Self { report, summary: None, deferred: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

fn mode_name(m: SimulationMode) -> &'static str {
    match m {
        SimulationMode::Analytic => "analytic",
        SimulationMode::Numeric => "numeric",
    }
}

// ---- bands ----

pub fn bands(c: &BandsConfig) -> Result<Outcome, CliError> {
    let span = c.p_span();
    check_band_request(c.q, c.n_kappa, c.n_bands, span)?;
    let b = band_structure(c.q, c.n_kappa, c.n_bands, span)?;
    let mut t = Table::new(vec!["kappa", "band", "energy"]);
    for (kappa, band, e) in b.rows() {
        t.push(vec![Cell::Float(kappa), Cell::Int(band as i64), Cell::Float(e)]);
    }
    Ok(Outcome::plain(Report::Table(t)))
}

// ---- diffract ----

struct DiffractPlan {
    mode: Mode,
    envelope: PulseEnvelope,
    until: f64,
    settings: mattersim::propagator::PropagationSettings,
}

fn plan_diffract(c: &DiffractConfig, mode_flag: Option<Mode>) -> Result<DiffractPlan, CliError> {
    let mode = mode_flag.or(c.mode).unwrap_or(Mode::Analytic);
    let envelope = c.envelope.build()?;
    let settings = c.settings.build()?;
    let (a, b) = envelope.support();
    let until = c.until.unwrap_or(b);
    if !until.is_finite() || until < a {
        return Err(CliError::Config(format!(
            "`until` = {until} must not precede the envelope start {a}"
        )));
    }
    match mode {
        Mode::Analytic => {
            if c.kappa != 0.0 {
                return Err(CliError::Config(format!(
                    "analytic diffraction models are defined at kappa = 0, got {}",
                    c.kappa
                )));
            }
            if c.until.is_some() {
                return Err(CliError::Config("`until` applies to numeric mode only".into()));
            }
            if c.model == AnalyticModel::Bragg && c.initial_order.abs() > 1 {
                return Err(CliError::Config(format!(
                    "the Bragg model acts on orders -1..=1, got initial order {}",
                    c.initial_order
                )));
            }
        }
        Mode::Numeric => {
            PlaneWaveState::basis(c.kappa, 0, 1)?;
        }
    }
    Ok(DiffractPlan { mode, envelope, until, settings })
}

pub fn diffract(c: &DiffractConfig, mode_flag: Option<Mode>) -> Result<Outcome, CliError> {
    let plan = plan_diffract(c, mode_flag)?;
    let p0 = c.initial_order;
    let state = match (plan.mode, c.model) {
        (Mode::Analytic, AnalyticModel::RamanNath) => {
            let gamma = 2.0 * plan.envelope.area();
            let span = raman_nath_p_span(gamma)?.max(p0.unsigned_abs() as usize);
            let (rn, _) = raman_nath_state(gamma, span)?;
            PlaneWaveState::new(0.0, p0 - span as i32, rn.amplitudes().to_vec())?
        }
        (Mode::Analytic, AnalyticModel::Bragg) => {
            bragg_apply(&PlaneWaveState::basis(0.0, p0, 1)?, &plan.envelope)?
        }
        (Mode::Numeric, _) => {
            let span = mattersim::default_p_span(plan.envelope.q_max())
                .max(p0.unsigned_abs() as usize + 1);
            let start = PlaneWaveState::basis(c.kappa, p0, span)?;
            let (a, _) = plan.envelope.support();
            propagate(&start, &plan.envelope, a, plan.until, &plan.settings)?
        }
    };
    let mut t = Table::new(vec!["order", "population", "phase"]);
    for line in diffraction_spectrum(&state) {
        t.push(vec![
            Cell::Int(line.order as i64),
            Cell::Float(line.population),
            Cell::Float(line.phase),
        ]);
    }
    Ok(Outcome::plain(Report::Table(t)))
}

// ---- interferometer ----

fn fit_json(trace: &SignalTrace) -> Value {
    match &trace.fit {
        Ok(f) => json!({
            "mode": mode_name(trace.mode),
            "phase_mod_pi": float_value(f.phase),
            "amplitude": float_value(f.amplitude),
            "offset": float_value(f.offset),
            "residual": float_value(f.residual),
        }),
        Err(e) => json!({
            "mode": mode_name(trace.mode),
            "phase_mod_pi": Value::Null,
            "amplitude": Value::Null,
            "offset": Value::Null,
            "residual": Value::Null,
            "fit_error": e.to_string(),
        }),
    }
}

pub fn interferometer(config: &InterferometerConfig, format: Format) -> Result<Outcome, CliError> {
    let trace = simulate(config)?;
    let summary = fit_json(&trace);
    let mut t = Table::new(vec!["tau", "signal"]);
    for (&tau, &s) in trace.times.iter().zip(&trace.signal) {
        t.push(vec![Cell::Float(tau), Cell::Float(s)]);
    }
    let report = match format {
        Format::Csv => Report::Table(t),
        Format::Json => {
            let mut doc = summary.clone();
            doc["trace"] = t.to_json();
            Report::Document(doc)
        }
    };
    let deferred = trace.fit.as_ref().err().map(|e| CliError::from(e.clone()));
    Ok(Outcome { report, summary: Some(summary), deferred })
}

// ---- sensitivity ----

fn check_epsilons(eps: &[f64]) -> Result<(), CliError> {
    if eps.is_empty() {
        return Err(CliError::Config("`epsilons` must not be empty".into()));
    }
    if let Some(e) = eps.iter().find(|e| !e.is_finite() || e.abs() > MAX_POWER_OFFSET) {
        return Err(CliError::Config(format!(
            "power offset {e} must be finite and within ±{MAX_POWER_OFFSET}"
        )));
    }
    Ok(())
}

pub fn sensitivity(
    spec: &SensitivitySpec,
    mode_flag: Option<Mode>,
    format: Format,
) -> Result<Outcome, CliError> {
    check_epsilons(&spec.epsilons)?;
    let config = spec.interferometer.build(mode_flag)?;
    let r: SensitivityReport = power_sensitivity(&config, &spec.epsilons)?;
    let mut t = Table::new(vec![
        "epsilon",
        "phase_mod_pi",
        "phase_unwrapped",
        "amplitude",
        "paper_mode_delta",
        "exact_mode_delta",
    ]);
    for p in &r.points {
        t.push(vec![
            Cell::Float(p.epsilon),
            Cell::Float(p.phase),
            Cell::Float(p.unwrapped),
            Cell::Float(p.amplitude),
            Cell::Float(r.paper_mode_slope * p.epsilon),
            Cell::Float(r.exact_mode_slope * p.epsilon),
        ]);
    }
    let summary = json!({
        "mode": mode_name(config.mode),
        "slope": float_value(r.slope),
        "paper_mode_slope": float_value(r.paper_mode_slope),
        "exact_mode_slope": float_value(r.exact_mode_slope),
    });
    let report = match format {
        Format::Csv => Report::Table(t),
        Format::Json => {
            let mut doc = summary.clone();
            doc["points"] = t.to_json();
            Report::Document(doc)
        }
    };
    Ok(Outcome { report, summary: Some(summary), deferred: None })
}

// ---- design-pulse ----

pub fn design_pulse(c: &DesignPulseConfig) -> Result<Outcome, CliError> {
    let shape = c.shape();
    let q = design_pi_pulse(&shape)?;
    let env = match &shape {
        PulseShape::Rectangular { duration } => PulseEnvelope::rectangular(q, 0.0, *duration)?,
        PulseShape::Gaussian { sigma } => PulseEnvelope::gaussian(q, 0.0, *sigma)?,
        PulseShape::Tabulated { profile } => {
            let base = PulseEnvelope::tabulated(profile.clone())?;
            base.scaled(q / base.q_max())?
        }
    };
    let mut t = Table::new(vec!["q_max", "rabi_phase"]);
    t.push(vec![Cell::Float(q), Cell::Float(rabi_phase(&env))]);
    Ok(Outcome::plain(Report::Table(t)))
}

// ---- validate-config ----

/// Check every precondition of the configured command without running it.
pub fn validate(config: &RunConfig, mode_flag: Option<Mode>) -> Result<(), CliError> {
    match config {
        RunConfig::Bands(c) => check_band_request(c.q, c.n_kappa, c.n_bands, c.p_span())?,
        RunConfig::Diffract(c) => {
            plan_diffract(c, mode_flag)?;
        }
        RunConfig::Interferometer(s) => {
            s.build(mode_flag)?;
        }
        RunConfig::Sensitivity(s) => {
            check_epsilons(&s.epsilons)?;
            s.interferometer.build(mode_flag)?;
        }
        RunConfig::DesignPulse(c) => {
            design_pi_pulse(&c.shape())?;
        }
    }
    Ok(())
}
