//! `sturmian` — spectra of Sturmian Hamiltonians through trace-map
//! dynamics: interval estimates, dimension sweeps, orbit and manifold
//! samples, and a self-check suite.
//!
//! Exit codes: 0 success, 1 usage error, 2 numeric failure, 3 verification
//! failure.

mod commands;
mod config;
mod emit;
mod error;

use clap::{Args, Parser, Subcommand};

use config::{parse_lambda_list, Format, RunConfig};
use error::{AppError, EXIT_USAGE};

#[derive(Parser)]
#[command(
    name = "sturmian",
    version,
    about = "Spectra of Sturmian Hamiltonians via trace-map dynamics",
    after_help = "The STURMIAN_THREADS environment variable caps the worker pool."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: CommonOpts,
}

#[derive(Args)]
struct CommonOpts {
    /// Digit sequence of alpha: "golden", "silver", "1,2,1", or "(1,2)*"
    /// (optionally with a prefix, e.g. "2,1,(3,1,2)*")
    #[arg(long, global = true, default_value = "golden")]
    alpha: String,

    /// Coupling constant lambda >= 0
    #[arg(long, global = true, default_value_t = 0.0)]
    lambda: f64,

    /// Comma-separated couplings, sorted descending (dimension-sweep)
    #[arg(long, global = true, value_name = "L1,L2,...")]
    lambda_list: Option<String>,

    /// Energy-grid spacing; also the stable-manifold stopping tolerance
    #[arg(long, global = true, default_value_t = 5e-3)]
    resolution: f64,

    /// Hole radius of the survival region
    #[arg(long, global = true, default_value_t = 0.05)]
    rho: f64,

    /// Iteration budget (orbit steps, profiling cap, rotation points,
    /// graph-transform depth)
    #[arg(long, global = true, default_value_t = 100)]
    max_steps: usize,

    /// Max-coordinate threshold that declares an orbit escaped (> 2)
    #[arg(long, global = true, default_value_t = 10.0)]
    escape_threshold: f64,

    /// Cone half-width parameter for the verification suite
    #[arg(long, global = true, default_value_t = 0.05)]
    beta: f64,

    /// Per-axis grid density for the verification sweeps
    #[arg(long, global = true, default_value_t = 40)]
    grid: usize,

    /// Write the artifact here instead of stdout; with --format csv a JSON
    /// summary lands alongside as <output>.json
    #[arg(long, global = true)]
    output: Option<std::path::PathBuf>,

    /// Artifact format
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Seed for the randomized verification checks
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the spectrum at a coupling as a union of intervals
    Spectrum,
    /// Per-coupling dimension estimates over a descending coupling list
    DimensionSweep,
    /// Estimate the survival set for a hole radius rho
    Survival,
    /// Classify the orbit of one energy
    Orbit {
        /// Energy of the spectral-line seed point
        energy: f64,
    },
    /// Sample the local stable manifold in chart coordinates
    StableManifold,
    /// Distinct gap lengths of the first max-steps rotation points
    ThreeDistance,
    /// Run the invariant suite; exits 3 on any failure
    Verify,
}

fn thread_pool_from_env() -> Result<usize, AppError> {
    match std::env::var("STURMIAN_THREADS") {
        Err(_) => {}
        Ok(s) => {
            let n: usize = s.trim().parse().map_err(|_| {
                AppError::Usage(format!("STURMIAN_THREADS must be a positive integer, got {s:?}"))
            })?;
            if n == 0 {
                return Err(AppError::Usage(
                    "STURMIAN_THREADS must be a positive integer".into(),
                ));
            }
            // a failure here means a pool already exists; that pool wins
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    Ok(rayon::current_num_threads())
}

fn run(cli: Cli) -> Result<i32, AppError> {
    let threads = thread_pool_from_env()?;

    let (command, energy) = match &cli.command {
        Command::Spectrum => ("spectrum", None),
        Command::DimensionSweep => ("dimension-sweep", None),
        Command::Survival => ("survival", None),
        Command::Orbit { energy } => ("orbit", Some(*energy)),
        Command::StableManifold => ("stable-manifold", None),
        Command::ThreeDistance => ("three-distance", None),
        Command::Verify => ("verify", None),
    };
    let lambda_list = cli
        .opts
        .lambda_list
        .as_deref()
        .map(parse_lambda_list)
        .transpose()?;

    let cfg = RunConfig {
        command: command.to_string(),
        alpha: cli.opts.alpha.clone(),
        lambda: cli.opts.lambda,
        lambda_list,
        energy,
        resolution: cli.opts.resolution,
        rho: cli.opts.rho,
        max_steps: cli.opts.max_steps,
        escape_threshold: cli.opts.escape_threshold,
        beta: cli.opts.beta,
        grid: cli.opts.grid,
        format: cli.opts.format,
        output: cli.opts.output.clone(),
        seed: cli.opts.seed,
        threads,
    };
    cfg.validate()?;

    match cli.command {
        Command::Spectrum => commands::cmd_spectrum(&cfg),
        Command::DimensionSweep => commands::cmd_dimension_sweep(&cfg),
        Command::Survival => commands::cmd_survival(&cfg),
        Command::Orbit { .. } => commands::cmd_orbit(&cfg),
        Command::StableManifold => commands::cmd_stable_manifold(&cfg),
        Command::ThreeDistance => commands::cmd_three_distance(&cfg),
        Command::Verify => commands::cmd_verify(&cfg),
    }
}

fn main() {
    // clap's own exits: help/version print and exit 0; parse errors exit 2
    // by default, remapped to 1 (usage) here
    let code = match <Cli as Parser>::try_parse() {
        Err(e) => {
            use clap::error::ErrorKind;
            let is_info = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = e.print();
            if is_info {
                0
            } else {
                EXIT_USAGE
            }
        }
        Ok(cli) => match run(cli) {
            Ok(code) => code,
            Err(err) => {
                eprintln!("{}", err.message());
                err.exit_code()
            }
        },
    };
    std::process::exit(code);
}
