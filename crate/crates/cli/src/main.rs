use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use crossover_cli::{commands, CliError, ExperimentConfig, Outcome, RawConfig};

#[derive(Parser)]
#[command(name = "crossover", version, about = "Random-string probing of text reservoirs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Flat key=value config file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    plot: Option<bool>,
    /// Extra `key=value` override; repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Generate and write the reservoir.
    GenCorpus,
    /// Probe over a range of string lengths and summarize.
    Scan,
    /// Finite-size analysis over several reservoir sizes.
    Fss,
    /// Compare measured P with the exact and analytic null values.
    CompareNull,
    /// Scan against the remote count backend.
    ProbeRemote,
}

fn load(cli: &Cli) -> Result<ExperimentConfig, CliError> {
    let mut raw = match &cli.config {
        Some(path) => RawConfig::load(path)?,
        None => RawConfig::default(),
    };
    for pair in &cli.overrides {
        raw.set_pair(pair)?;
    }
    if let Some(seed) = cli.seed {
        raw.set("seed", &seed.to_string());
    }
    if let Some(workers) = cli.workers {
        raw.set("workers", &workers.to_string());
    }
    if let Some(out) = &cli.out {
        raw.set("out", &out.to_string_lossy());
    }
    if let Some(plot) = cli.plot {
        raw.set("plot", &plot.to_string());
    }
    if matches!(cli.command, Command::ProbeRemote) {
        raw.set("backend", "remote");
    }
    ExperimentConfig::from_raw(&raw)
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let cfg = load(cli)?;
    match cli.command {
        Command::GenCorpus => commands::cmd_gen_corpus(&cfg),
        Command::Scan => commands::cmd_scan(&cfg),
        Command::Fss => commands::cmd_fss(&cfg),
        Command::CompareNull => commands::cmd_compare_null(&cfg),
        Command::ProbeRemote => commands::cmd_probe_remote(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) if outcome.is_partial() => {
            for line in &outcome.aborted {
                eprintln!("warning[PartialResults]: {line}");
            }
            ExitCode::from(3)
        }
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.class());
            ExitCode::from(1)
        }
    }
}
