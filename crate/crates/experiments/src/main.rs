use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hris_experiments::output::output_stem;
use hris_experiments::{sweeps, ExperimentConfig, ExperimentError, Table};

#[derive(Parser)]
#[command(name = "hris", version, about = "HRIS channel estimation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compare analytic and Monte Carlo MSEs; exits with 2 on a breach.
    Validate(Common),
    /// Shared power-splitting sweep with optimized and random phases.
    RhoSweep(Common),
    /// Optimizer traces from several random initializations.
    Convergence(Common),
    /// Cascaded NMSE versus SNR, pilot length and RF chains.
    Curves(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Output directory; defaults to `output_dir` from the config.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Also write a JSON copy of the table.
    #[arg(long)]
    json: bool,
}

impl Common {
    fn load(&self) -> Result<(ExperimentConfig, PathBuf), ExperimentError> {
        let mut config = ExperimentConfig::load(&self.config)?;
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(trials) = self.trials {
            config.trials = trials;
        }
        config.validate()?;
        let out = self
            .out
            .clone()
            .or_else(|| config.output_dir.clone())
            .ok_or_else(|| ExperimentError::Config("no output directory: pass --out or set output_dir".into()))?;
        Ok((config, out))
    }

    fn save(&self, table: &Table, dir: &std::path::Path, sweep: &str) -> Result<(), ExperimentError> {
        for path in table.save(dir, &output_stem(dir, sweep), self.json)? {
            println!("{}", path.display());
        }
        Ok(())
    }
}

fn run(cli: Cli) -> Result<ExitCode, ExperimentError> {
    let (common, name) = match &cli.command {
        Command::Validate(c) => (c, "validate"),
        Command::RhoSweep(c) => (c, "rho-sweep"),
        Command::Convergence(c) => (c, "convergence"),
        Command::Curves(c) => (c, "curves"),
    };
    let (config, out) = common.load()?;
    match &cli.command {
        Command::Validate(_) => {
            let report = sweeps::run_validate(&config)?;
            common.save(&report.table, &out, name)?;
            if !report.passed() {
                eprintln!("tolerance breach: {}", report.failures.join(", "));
                return Ok(ExitCode::from(2));
            }
        }
        Command::RhoSweep(_) => common.save(&sweeps::run_rho_sweep(&config)?, &out, name)?,
        Command::Convergence(_) => common.save(&sweeps::run_convergence(&config)?, &out, name)?,
        Command::Curves(_) => common.save(&sweeps::run_curves(&config)?, &out, name)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
