//! Experiment configuration: flat `key=value` lines with dotted section
//! prefixes, layered file-then-flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crossover_core::corpus::{parse_count, CorpusSpec, SPEC_KEYS};
use crossover_core::probe::DEFAULT_QUERIES_PER_N;
use crossover_core::stats::DEFAULT_THRESHOLD;
use crossover_core::Alphabet;
use crossover_net::{RemoteConfig, REMOTE_KEYS};

use crate::CliError;

/// Unparsed configuration entries; later `set` calls override earlier ones.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawConfig {
    entries: BTreeMap<String, String>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut raw = Self::default();
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key=value, got {line:?}", no + 1)))?;
            raw.set(key, value);
        }
        Ok(raw)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: &str) {
        self.entries.insert(key.trim().to_owned(), value.trim().to_owned());
    }

    /// Applies a `key=value` override.
    pub fn set_pair(&mut self, pair: &str) -> Result<(), CliError> {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("override {pair:?} is not key=value")))?;
        self.set(k, v);
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        self.get(key)
            .map(|v| v.parse().map_err(|_| CliError::Config(format!("{key}: cannot parse {v:?}"))))
            .transpose()
    }

    fn count(&self, key: &str) -> Result<Option<usize>, CliError> {
        self.get(key)
            .map(|v| parse_count(key, v).map_err(|e| CliError::Config(e.to_string())))
            .transpose()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CorpusSource {
    /// Zipf vocabulary with typo channel and random-string injection.
    Zipf(CorpusSpec),
    /// Null-model reservoir: `tokens_per_length` uniform strings at every
    /// length of `lengths` (the campaign range unless set).
    Uniform {
        alphabet: Alphabet,
        tokens_per_length: usize,
        lengths: Option<(usize, usize)>,
        doc_count: usize,
        seed: u64,
    },
    File { path: PathBuf, alphabet: Alphabet },
}

impl CorpusSource {
    pub fn alphabet(&self) -> &Alphabet {
        match self {
            CorpusSource::Zipf(spec) => &spec.alphabet,
            CorpusSource::Uniform { alphabet, .. } | CorpusSource::File { alphabet, .. } => alphabet,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FssMode {
    Simulate,
    Analytic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub corpus: Option<CorpusSource>,
    pub n_lo: usize,
    pub n_hi: usize,
    pub queries_per_n: usize,
    pub dedup: bool,
    pub campaign_seed: u64,
    pub remote: Option<RemoteConfig>,
    pub use_remote: bool,
    pub out_dir: PathBuf,
    pub plot: bool,
    pub workers: usize,
    pub threshold: f64,
    pub tail_cutoff: Option<u64>,
    pub write_snapshot: bool,
    pub fss_sizes: Vec<u64>,
    pub fss_mode: FssMode,
}

const TOP_KEYS: [&str; 6] = ["seed", "workers", "out", "plot", "backend", "threshold"];
const CORPUS_EXTRA_KEYS: [&str; 6] = ["kind", "spec", "path", "alphabet_size", "tokens_per_length", "length_range"];
const CAMPAIGN_KEYS: [&str; 5] = ["n_lo", "n_hi", "queries", "dedup", "seed"];
const STATS_KEYS: [&str; 1] = ["tail_cutoff"];
const INDEX_KEYS: [&str; 1] = ["snapshot"];
const FSS_KEYS: [&str; 2] = ["sizes", "mode"];

fn check_known_keys(raw: &RawConfig) -> Result<(), CliError> {
    for key in raw.entries.keys() {
        let known = match key.split_once('.') {
            None => TOP_KEYS.contains(&key.as_str()),
            Some(("corpus", k)) => SPEC_KEYS.contains(&k) || CORPUS_EXTRA_KEYS.contains(&k),
            Some(("campaign", k)) => CAMPAIGN_KEYS.contains(&k),
            Some(("remote", k)) => REMOTE_KEYS.contains(&k),
            Some(("stats", k)) => STATS_KEYS.contains(&k),
            Some(("index", k)) => INDEX_KEYS.contains(&k),
            Some(("fss", k)) => FSS_KEYS.contains(&k),
            Some(_) => false,
        };
        if !known {
            return Err(CliError::Config(format!("unknown config key {key:?}")));
        }
    }
    Ok(())
}

fn parse_pair(key: &str, value: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Config(format!("{key}: expected `lo,hi`, got {value:?}"));
    let (a, b) = value.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn corpus_alphabet(raw: &RawConfig) -> Result<Alphabet, CliError> {
    let alphabet = match (raw.get("corpus.alphabet"), raw.parsed::<usize>("corpus.alphabet_size")?) {
        (Some(symbols), _) => Alphabet::new(symbols),
        (None, Some(size)) => Alphabet::lowercase(size),
        (None, None) => Ok(Alphabet::default()),
    };
    alphabet.map_err(|e| CliError::Config(format!("corpus alphabet: {e}")))
}

impl ExperimentConfig {
    pub fn from_raw(raw: &RawConfig) -> Result<Self, CliError> {
        check_known_keys(raw)?;
        let seed: u64 = raw.parsed("seed")?.unwrap_or(0);
        let corpus = match raw.get("corpus.kind") {
            None => None,
            Some("zipf") => {
                let mut spec = match raw.get("corpus.spec") {
                    Some(path) => {
                        let text = std::fs::read_to_string(path)
                            .map_err(|e| CliError::Config(format!("corpus.spec {path}: {e}")))?;
                        CorpusSpec::parse_file(&text)?
                    }
                    None => CorpusSpec::default(),
                };
                if raw.get("corpus.spec").is_none() {
                    spec.seed = seed;
                }
                for key in SPEC_KEYS {
                    if let Some(v) = raw.get(&format!("corpus.{key}")) {
                        spec.set(key, v)?;
                    }
                }
                if raw.get("corpus.alphabet_size").is_some() && raw.get("corpus.alphabet").is_none() {
                    spec.alphabet = corpus_alphabet(raw)?;
                }
                spec.validate()?;
                Some(CorpusSource::Zipf(spec))
            }
            Some("uniform") => Some(CorpusSource::Uniform {
                alphabet: corpus_alphabet(raw)?,
                tokens_per_length: raw.count("corpus.tokens_per_length")?.unwrap_or(17_576),
                lengths: raw.get("corpus.length_range").map(|v| parse_pair("corpus.length_range", v)).transpose()?,
                doc_count: raw.count("corpus.doc_count")?.unwrap_or(100),
                seed: raw.parsed("corpus.seed")?.unwrap_or(seed),
            }),
            Some("file") => Some(CorpusSource::File {
                path: raw
                    .get("corpus.path")
                    .map(PathBuf::from)
                    .ok_or_else(|| CliError::Config("corpus.kind=file needs corpus.path".into()))?,
                alphabet: corpus_alphabet(raw)?,
            }),
            Some(other) => {
                return Err(CliError::Config(format!("corpus.kind must be zipf, uniform or file, got {other:?}")))
            }
        };

        let remote = if raw.entries.keys().any(|k| k.starts_with("remote.")) {
            let mut remote = RemoteConfig::default();
            for key in REMOTE_KEYS {
                if let Some(v) = raw.get(&format!("remote.{key}")) {
                    remote.set(key, v)?;
                }
            }
            Some(remote)
        } else {
            None
        };
        let use_remote = match raw.get("backend").unwrap_or("local") {
            "local" => false,
            "remote" => true,
            other => return Err(CliError::Config(format!("backend must be local or remote, got {other:?}"))),
        };
        let fss_mode = match raw.get("fss.mode").unwrap_or("simulate") {
            "simulate" => FssMode::Simulate,
            "analytic" => FssMode::Analytic,
            other => return Err(CliError::Config(format!("fss.mode must be simulate or analytic, got {other:?}"))),
        };
        let fss_sizes = match raw.get("fss.sizes") {
            Some(list) => list
                .split(',')
                .map(|s| parse_count("fss.sizes", s.trim()).map(|n| n as u64))
                .collect::<Result<Vec<_>, _>>()?,
            None => vec![676, 17_576, 456_976],
        };

        let config = Self {
            corpus,
            n_lo: raw.parsed("campaign.n_lo")?.unwrap_or(1),
            n_hi: raw.parsed("campaign.n_hi")?.unwrap_or(10),
            queries_per_n: raw.count("campaign.queries")?.unwrap_or(DEFAULT_QUERIES_PER_N),
            dedup: raw.parsed("campaign.dedup")?.unwrap_or(false),
            campaign_seed: raw.parsed("campaign.seed")?.unwrap_or(seed),
            remote,
            use_remote,
            out_dir: raw.get("out").map_or_else(|| PathBuf::from("out"), PathBuf::from),
            plot: raw.parsed("plot")?.unwrap_or(true),
            workers: raw.parsed("workers")?.unwrap_or(0),
            threshold: raw.parsed("threshold")?.unwrap_or(DEFAULT_THRESHOLD),
            tail_cutoff: raw.parsed("stats.tail_cutoff")?,
            write_snapshot: raw.parsed("index.snapshot")?.unwrap_or(false),
            fss_sizes,
            fss_mode,
        };
        if !(0.0 < config.threshold && config.threshold < 1.0) {
            return Err(CliError::Config(format!("threshold must lie in (0, 1), got {}", config.threshold)));
        }
        Ok(config)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.corpus.as_ref().map_or_else(Alphabet::default, |c| c.alphabet().clone())
    }
}
