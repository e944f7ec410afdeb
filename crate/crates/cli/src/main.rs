mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::{Format, Outcome, Report};
use config::{Mode, RunConfig};
use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "mattersim", version, about = "Diffraction phases of matter waves in standing light waves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bloch band energies on a uniform κ grid.
    Bands(Common),
    /// Diffraction spectrum after a pulse.
    Diffract(Common),
    /// Contrast-interferometer signal trace and phase fit.
    Interferometer(Common),
    /// Interferometer phase against relative Bragg power.
    Sensitivity(Common),
    /// Peak coupling of a π pulse of given shape.
    DesignPulse(Common),
    /// Check a config file without running it.
    ValidateConfig(Common),
}

#[derive(Args, Debug)]
struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output file, written atomically. Defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Overrides the mode given in the config.
    #[arg(long, value_enum)]
    mode: Option<Mode>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("MATTERSIM_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| {
            CliError::Config(format!("MATTERSIM_THREADS must be a positive integer, got {raw:?}"))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("cannot configure {n} threads: {e}")))
}

fn expect_command(config: &RunConfig, name: &str) -> Result<(), CliError> {
    if config.command() != name {
        return Err(CliError::Config(format!(
            "config is for `{}`, not `{name}`",
            config.command()
        )));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    let (name, args) = match &cli.command {
        Command::Bands(a) => ("bands", a),
        Command::Diffract(a) => ("diffract", a),
        Command::Interferometer(a) => ("interferometer", a),
        Command::Sensitivity(a) => ("sensitivity", a),
        Command::DesignPulse(a) => ("design-pulse", a),
        Command::ValidateConfig(a) => ("validate-config", a),
    };
    let config = RunConfig::load(&args.config)?;
    let format: Format = args.format.into();

    if name == "validate-config" {
        commands::validate(&config, args.mode)?;
        println!("ok: {} config is valid", config.command());
        return Ok(());
    }
    expect_command(&config, name)?;

    let outcome: Outcome = match &config {
        RunConfig::Bands(c) => commands::bands(c)?,
        RunConfig::Diffract(c) => commands::diffract(c, args.mode)?,
        RunConfig::Interferometer(s) => commands::interferometer(&s.build(args.mode)?, format)?,
        RunConfig::Sensitivity(s) => commands::sensitivity(s, args.mode, format)?,
        RunConfig::DesignPulse(c) => commands::design_pulse(c)?,
    };

    let text = match (&outcome.report, format) {
        (Report::Table(t), Format::Csv) => t.to_csv(),
        (Report::Table(t), Format::Json) => output::render_json(&t.to_json()),
        (Report::Document(d), _) => output::render_json(d),
    };
    output::emit(&text, args.out.as_deref())?;
    if let (Some(summary), Some(_)) = (&outcome.summary, &args.out) {
        println!("{}", serde_json::to_string(summary).expect("JSON values always serialize"));
    }
    match outcome.deferred {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mattersim: {e}");
            e.exit_code()
        }
    }
}
