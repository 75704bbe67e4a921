mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

use hypmax::QuadratureConfig;

/// Fourier analysis on hyperbolic space and fractional spherical maximal functions.
#[derive(Debug, Parser)]
#[command(name = "hypmax", version, about)]
#[command(
    after_help = "Options may also come from a `key = value` file given with --config PATH; \
command-line flags take precedence. HYPMAX_THREADS caps the worker threads."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output file (stdout when absent)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the multiplier m^α_t(λ) or its dyadic sups
    Multiplier(commands::MultiplierArgs),
    /// Fractional spherical means of a Gaussian bump, spectral or direct
    Mean(commands::MeanArgs),
    /// Maximal function of a Gaussian bump over a geometric t-grid
    Maximal(commands::MaximalArgs),
    /// Decay and large-t checks on the multiplier and c^α
    Asymptotics(commands::AsymptoticsArgs),
    /// Lower-bound sweeps over a counterexample family, with exponent fit
    Counterexample(commands::CounterexampleArgs),
    /// Boundedness region curves, or the verdict at one (p, α)
    Regions(commands::RegionsArgs),
    /// Run the acceptance checks
    Validate(commands::ValidateArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Multiplier(_) => "multiplier",
            Command::Mean(_) => "mean",
            Command::Maximal(_) => "maximal",
            Command::Asymptotics(_) => "asymptotics",
            Command::Counterexample(_) => "counterexample",
            Command::Regions(_) => "regions",
            Command::Validate(_) => "validate",
        }
    }
}

/// Overrides of the default quadrature tolerances.
#[derive(Debug, Clone, Args)]
pub struct QuadArgs {
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub abs_tol: Option<f64>,
    #[arg(long)]
    pub max_panels: Option<usize>,
    #[arg(long)]
    pub jacobi_nodes: Option<usize>,
}

impl QuadArgs {
    pub fn resolve(&self) -> QuadratureConfig {
        let d = QuadratureConfig::default();
        QuadratureConfig {
            rel_tol: self.rel_tol.unwrap_or(d.rel_tol),
            abs_tol: self.abs_tol.unwrap_or(d.abs_tol),
            max_panels: self.max_panels.unwrap_or(d.max_panels),
            jacobi_nodes: self.jacobi_nodes.unwrap_or(d.jacobi_nodes),
        }
    }
}

/// Process outcome, mapped onto exit codes 0 / 1 / 2.
pub enum Failure {
    /// A check ran and came out of tolerance.
    Validation(String),
    /// Bad input: flags, configuration, paths.
    Usage(String),
}

fn long_flags(command: &str) -> Vec<String> {
    let cmd = Cli::command();
    let mut flags: Vec<String> = cmd
        .get_arguments()
        .filter_map(|a| a.get_long().map(String::from))
        .collect();
    if let Some(sub) = cmd.find_subcommand(command) {
        flags.extend(sub.get_arguments().filter_map(|a| a.get_long().map(String::from)));
    }
    flags
}

fn set_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("HYPMAX_THREADS") else {
        return Ok(());
    };
    let k: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&k| k > 0)
        .ok_or_else(|| Failure::Usage(format!("HYPMAX_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(k)
        .build_global()
        .map_err(|e| Failure::Usage(format!("cannot size the thread pool: {e}")))
}

fn run(mut argv: Vec<String>) -> Result<(), Failure> {
    let usage = |e: config::ConfigError| Failure::Usage(e.0);
    if let Some(path) = config::take_config_flag(&mut argv).map_err(usage)? {
        let entries = config::load_config(path.as_ref()).map_err(usage)?;
        let names: Vec<String> = Cli::command()
            .get_subcommands()
            .map(|s| s.get_name().to_string())
            .collect();
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        config::merge_into_argv(&mut argv, &entries, &names, long_flags, &path).map_err(usage)?;
    }
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return Ok(());
        }
        Err(e) => return Err(Failure::Usage(e.render().to_string())),
    };
    set_threads()?;
    commands::dispatch(&cli)
}

fn main() -> ExitCode {
    match run(std::env::args().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("{}", msg.trim_end());
            ExitCode::from(2)
        }
    }
}
