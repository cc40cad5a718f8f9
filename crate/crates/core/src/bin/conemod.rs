//! Command-line front end: `verify`, `flow-trace` and `entropy`.
//!
//! Exit status `0` means every check passed, `1` that a check failed and `2`
//! a configuration or input error. Output files are written only after the
//! computation has finished.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use conemod::cli_harness::{
    default_grid, exit_status, flow_trace, load_seeds, run_entropy_command, run_suite, threads_from_env,
    to_json_string, EntropyCommand, RunConfig, Suite, EXIT_CONFIG, EXIT_PASS, THREADS_ENV,
};
use conemod::wave_space::GridSpec;
use conemod::{Error, Result};

#[derive(Parser)]
#[command(
    name = "conemod",
    version,
    about = "Modular flow and relative entropy of free massless fermions on the unit double cone"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and write its JSON report.
    Verify(VerifyArgs),
    /// Sample trajectories of the conformal flow and write them as CSV.
    FlowTrace(FlowTraceArgs),
    /// Evaluate the three entropy routes on a state file and write JSON.
    Entropy(EntropyArgs),
}

/// Grid overrides; a missing value falls back to the default grid.
#[derive(Args, Clone, Copy)]
struct GridArgs {
    /// Points per axis.
    #[arg(long = "grid-n")]
    n: Option<usize>,
    /// Half-width of the box.
    #[arg(long = "grid-l")]
    l: Option<f64>,
}

impl GridArgs {
    fn resolve(self, base: Option<GridSpec>) -> Result<Option<GridSpec>> {
        if self.n.is_none() && self.l.is_none() {
            return Ok(None);
        }
        let base = base.unwrap_or_default();
        GridSpec::new(self.l.unwrap_or(base.half_width()), self.n.unwrap_or(base.points())).map(Some)
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name: spinor, flow, wave, modular or entropy.
    #[arg(long)]
    suite: Option<String>,
    #[command(flatten)]
    grid: GridArgs,
    /// Seed of the random streams.
    #[arg(long)]
    seed: Option<u64>,
    /// JSON run configuration; command-line flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Additional state file for the entropy suite.
    #[arg(long)]
    state: Option<PathBuf>,
    /// Report path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FlowTraceArgs {
    /// Largest |λ| sampled.
    #[arg(long = "lambda-max")]
    lambda_max: f64,
    /// Samples per seed.
    #[arg(long)]
    steps: usize,
    /// JSON array of [x0, x1, x2, x3] seeds.
    #[arg(long)]
    seeds: PathBuf,
    /// CSV path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EntropyArgs {
    /// State description (JSON).
    #[arg(long)]
    state: PathBuf,
    /// Keep the state's norm instead of rescaling it to one.
    #[arg(long = "no-normalize")]
    no_normalize: bool,
    /// Embed the state even when its majorana flag is unset.
    #[arg(long)]
    embed: bool,
    #[command(flatten)]
    grid: GridArgs,
    /// Report path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(Error::from),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn verify(args: VerifyArgs) -> Result<i32> {
    let mut config = match &args.config {
        Some(path) => RunConfig::from_path(path)?,
        None => {
            let name = args
                .suite
                .as_deref()
                .ok_or_else(|| Error::InvalidInput("suite: either --suite or --config is required".into()))?;
            RunConfig::new(name.parse::<Suite>()?)
        }
    };
    if let Some(name) = &args.suite {
        config.suite = name.parse()?;
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(state) = args.state {
        config.state = Some(state);
    }
    if let Some(out) = args.out {
        config.out = Some(out);
    }
    let base = config.grid_override()?.or_else(|| default_grid(config.suite));
    if let Some(grid) = args.grid.resolve(base)? {
        config.grid = Some(grid.into());
    }
    let report = run_suite(&config)?;
    for name in report.failures() {
        log::warn!("check failed: {name}");
    }
    emit(&to_json_string(&report)?, config.out.as_ref())?;
    Ok(exit_status(report.pass))
}

fn trace(args: FlowTraceArgs) -> Result<i32> {
    let seeds = load_seeds(&args.seeds)?;
    let table = flow_trace(args.lambda_max, args.steps, &seeds)?;
    emit(&table.to_csv(), args.out.as_ref())?;
    Ok(EXIT_PASS)
}

fn entropy(args: EntropyArgs) -> Result<i32> {
    let cmd = EntropyCommand {
        state: args.state,
        normalize: !args.no_normalize,
        embed: args.embed,
        grid: args.grid.resolve(None)?,
    };
    let output = run_entropy_command(&cmd)?;
    for check in output.checks.iter().filter(|c| !c.pass) {
        log::warn!("check failed: {}", check.check_name);
    }
    emit(&to_json_string(&output)?, args.out.as_ref())?;
    Ok(exit_status(output.pass))
}

fn run(cli: Cli) -> Result<i32> {
    if let Some(threads) = threads_from_env()? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Error::InvalidInput(format!("{THREADS_ENV}: {e}")))?;
    }
    match cli.command {
        Command::Verify(a) => verify(a),
        Command::FlowTrace(a) => trace(a),
        Command::Entropy(a) => entropy(a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
    };
    ExitCode::from(code as u8)
}
