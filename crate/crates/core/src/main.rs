use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::Parser;

use contribsim::harness::{sweep, write_results, write_rows, ExperimentConfig};
use contribsim::scenarios::ScenarioKind;
use contribsim::strategies::StrategyKind;

/// Run contribution-game experiments and write long-format CSV results.
///
/// Flags override values read from `--config`.
#[derive(Parser, Debug)]
#[command(name = "contribsim", version)]
struct Cli {
    /// TOML experiment file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// synthetic, grid or sensing.
    #[arg(long)]
    scenario: Option<ScenarioKind>,
    /// Comma-separated strategies, or `all`.
    #[arg(long)]
    strategy: Option<String>,
    /// Comma-separated population sizes.
    #[arg(long, value_delimiter = ',')]
    agents: Option<Vec<usize>>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Approximation factor of the knapsack strategy.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Output CSV; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_strategies(s: &str) -> anyhow::Result<Vec<StrategyKind>> {
    if s == "all" {
        return Ok(StrategyKind::ALL.to_vec());
    }
    let kinds = s
        .split(',')
        .map(|t| t.trim().parse::<StrategyKind>())
        .collect::<Result<Vec<_>, _>>()?;
    if kinds.is_empty() {
        bail!("no strategy given");
    }
    Ok(kinds)
}

fn build_config(cli: Cli) -> anyhow::Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::from_file(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = cli.scenario {
        cfg.scenario = s;
    }
    if let Some(s) = &cli.strategy {
        cfg.strategies = parse_strategies(s)?;
    }
    if let Some(a) = cli.agents {
        cfg.population_sizes = a;
    }
    if let Some(s) = cli.steps {
        cfg.steps = s;
    }
    if let Some(r) = cli.reps {
        cfg.repetitions = r;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(e) = cli.epsilon {
        cfg.strategy_params.epsilon = e;
    }
    if cli.out.is_some() {
        cfg.output = cli.out;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let cfg = build_config(cli)?;
    let rows = sweep(&cfg)?;
    match &cfg.output {
        Some(path) => {
            write_results(&rows, path)?;
            log::info!("wrote {} rows to {}", rows.len(), path.display());
        }
        None => write_rows(std::io::stdout().lock(), &rows).context("writing results to stdout")?,
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
