//! End-to-end experiment driver: generate a reservoir, index it, probe it
//! with random strings and write the statistics as CSV and SVG.

pub mod commands;
pub mod config;
pub mod plot;

use std::path::PathBuf;

use crossover_core::{CorpusError, ProbeError, StatsError};
use crossover_net::NetError;
use thiserror::Error;

pub use commands::{cmd_compare_null, cmd_fss, cmd_gen_corpus, cmd_probe_remote, cmd_scan, Outcome};
pub use config::{CorpusSource, ExperimentConfig, FssMode, RawConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Probe(#[from] ProbeError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error(transparent)]
    Net(#[from] NetError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    /// Short class name printed on the diagnostic stream.
    pub fn class(&self) -> &'static str {
        match self {
            CliError::Config(_) => "ConfigError",
            CliError::Corpus(CorpusError::Parse { .. }) => "ParseError",
            CliError::Corpus(_) => "CorpusError",
            CliError::Probe(_) => "ProbeError",
            CliError::Stats(StatsError::InsufficientData(_)) => "InsufficientData",
            CliError::Stats(StatsError::NoCrossing) => "NoCrossing",
            CliError::Stats(_) => "StatsError",
            CliError::Net(NetError::BackendUnavailable { .. }) => "BackendUnavailable",
            CliError::Net(NetError::BackendRejected { .. }) => "BackendRejected",
            CliError::Net(NetError::Parse(_)) => "ParseError",
            CliError::Net(_) => "NetError",
            CliError::Io { .. } => "IoError",
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Self {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }
}
