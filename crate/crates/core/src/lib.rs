//! Synthetic text reservoirs and the random-query crossover experiment.
//!
//! The pipeline is `corpus` (generate a reservoir) → `index` (exact-match
//! result counts) → `probe` (seeded campaigns of random N-letter queries) →
//! `stats` (order parameter, susceptibility, histograms, tail exponent,
//! crossover point, null model and finite-size fit).

pub mod alphabet;
pub mod corpus;
pub mod fmt;
pub mod index;
pub mod probe;
pub mod rng;
pub mod stats;

pub use alphabet::{Alphabet, AlphabetError};
pub use corpus::{Corpus, CorpusError, CorpusSpec};
pub use index::{Index, IndexError, Posting};
pub use probe::{
    run_campaign, BackendError, Campaign, CampaignRun, ProbeError, QueryBackend, QueryRecord,
    RunStatus, SizeRun,
};
pub use stats::{CampaignSummary, LogHistogram, NullModel, StatsError};
