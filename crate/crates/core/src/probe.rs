//! Seeded campaigns of random N-letter queries.
//!
//! Query `i` for length `N` draws from the counter-based stream
//! `(seed, N, i)`, so a campaign's records depend only on the campaign and
//! the backend, never on the worker count or scheduling.

use std::collections::HashSet;
use std::io::Write;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::alphabet::Alphabet;
use crate::fmt::csv_field;
use crate::index::{Index, IndexError};
use crate::rng::{stream, Domain};

/// Paper-scale default: 2·10^4 random strings per length.
pub const DEFAULT_QUERIES_PER_N: usize = 20_000;

/// Draws allowed per record when deduplicating before the length is
/// declared exhausted.
pub const DEDUP_RETRY_BUDGET: usize = 100;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProbeError {
    #[error("query length must be at least 1")]
    InvalidQueryLength,
    #[error("invalid campaign: {0}")]
    InvalidCampaign(String),
}

/// Failure of a single count request. None of these is ever turned into a
/// zero result count.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum BackendError {
    #[error("backend unavailable: {0}")]
    Unavailable(String),
    #[error("backend rejected the request: {0}")]
    Rejected(String),
    #[error("could not extract a result count: {0}")]
    Parse(String),
    #[error("invalid query: {0}")]
    InvalidQuery(String),
}

/// Anything that can answer "how many results for this query?".
pub trait QueryBackend: Send + Sync {
    fn count(&self, query: &str) -> Result<u64, BackendError>;
}

impl QueryBackend for Index {
    fn count(&self, query: &str) -> Result<u64, BackendError> {
        self.lookup(query).map_err(|e: IndexError| BackendError::InvalidQuery(e.to_string()))
    }
}

impl<T: QueryBackend + ?Sized> QueryBackend for &T {
    fn count(&self, query: &str) -> Result<u64, BackendError> {
        (**self).count(query)
    }
}

impl<T: QueryBackend + ?Sized> QueryBackend for Arc<T> {
    fn count(&self, query: &str) -> Result<u64, BackendError> {
        (**self).count(query)
    }
}

impl<T: QueryBackend + ?Sized> QueryBackend for Box<T> {
    fn count(&self, query: &str) -> Result<u64, BackendError> {
        (**self).count(query)
    }
}

/// A string of `n` i.i.d. uniform symbols drawn from `rng`.
pub fn random_string<R: Rng + ?Sized>(
    n: usize,
    alphabet: &Alphabet,
    rng: &mut R,
) -> Result<String, ProbeError> {
    if n == 0 {
        return Err(ProbeError::InvalidQueryLength);
    }
    Ok(alphabet.random_string(n, rng))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Campaign {
    pub n_lo: usize,
    pub n_hi: usize,
    pub queries_per_n: usize,
    pub seed: u64,
    pub dedup: bool,
    pub backend_id: String,
    pub alphabet: Alphabet,
}

impl Default for Campaign {
    fn default() -> Self {
        Self {
            n_lo: 1,
            n_hi: 10,
            queries_per_n: DEFAULT_QUERIES_PER_N,
            seed: 0,
            dedup: false,
            backend_id: "local".into(),
            alphabet: Alphabet::default(),
        }
    }
}

impl Campaign {
    pub fn validate(&self) -> Result<(), ProbeError> {
        if self.n_lo == 0 {
            return Err(ProbeError::InvalidQueryLength);
        }
        if self.n_lo > self.n_hi {
            return Err(ProbeError::InvalidCampaign(format!(
                "length range [{}, {}] is empty",
                self.n_lo, self.n_hi
            )));
        }
        if self.queries_per_n == 0 {
            return Err(ProbeError::InvalidCampaign("queries_per_n must be at least 1".into()));
        }
        Ok(())
    }

    /// The `seq`-th query for length `n` without deduplication.
    pub fn query(&self, n: usize, seq: usize) -> Result<String, ProbeError> {
        let mut rng = stream(self.seed, Domain::Query, n as u64, seq as u64);
        random_string(n, &self.alphabet, &mut rng)
    }

    fn draw_queries(&self, n: usize) -> Result<(Vec<String>, bool), ProbeError> {
        if !self.dedup {
            let queries = (0..self.queries_per_n)
                .into_par_iter()
                .map(|seq| self.query(n, seq))
                .collect::<Result<Vec<_>, _>>()?;
            return Ok((queries, false));
        }
        let space = self.alphabet.space_size(n);
        let mut seen = HashSet::new();
        let mut queries = Vec::new();
        'records: for seq in 0..self.queries_per_n {
            if seen.len() as f64 >= space {
                return Ok((queries, true));
            }
            let mut rng = stream(self.seed, Domain::Query, n as u64, seq as u64);
            for _ in 0..DEDUP_RETRY_BUDGET {
                let q = random_string(n, &self.alphabet, &mut rng)?;
                if seen.insert(q.clone()) {
                    queries.push(q);
                    continue 'records;
                }
            }
            return Ok((queries, true));
        }
        Ok((queries, false))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryRecord {
    pub n: usize,
    pub query: String,
    pub e: u64,
    pub sequence_no: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunStatus {
    Complete,
    /// Deduplication ran out of fresh strings before reaching the quota.
    Exhausted { requested: usize, realized: usize },
    /// The backend failed at `sequence_no`; records before it are kept.
    Aborted { sequence_no: usize, error: BackendError },
}

impl RunStatus {
    pub fn is_partial(&self) -> bool {
        matches!(self, RunStatus::Aborted { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeRun {
    pub n: usize,
    pub records: Vec<QueryRecord>,
    pub status: RunStatus,
}

impl SizeRun {
    pub fn e_values(&self) -> Vec<u64> {
        self.records.iter().map(|r| r.e).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CampaignRun {
    pub backend_id: String,
    pub sizes: Vec<SizeRun>,
}

impl CampaignRun {
    pub fn records(&self) -> impl Iterator<Item = &QueryRecord> {
        self.sizes.iter().flat_map(|s| s.records.iter())
    }

    pub fn size(&self, n: usize) -> Option<&SizeRun> {
        self.sizes.iter().find(|s| s.n == n)
    }

    pub fn is_partial(&self) -> bool {
        self.sizes.iter().any(|s| s.status.is_partial())
    }

    /// Raw record CSV: header `n,seq,query,e`, rows ordered by `(n, seq)`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "n,seq,query,e")?;
        for r in self.records() {
            writeln!(out, "{},{},{},{}", r.n, r.sequence_no, csv_field(&r.query), r.e)?;
        }
        out.flush()
    }
}

/// Runs `campaign` against `backend` on the current rayon pool.
///
/// A backend failure aborts only the affected length: records up to the
/// failing query are kept and the length is marked [`RunStatus::Aborted`].
pub fn run_campaign<B>(campaign: &Campaign, backend: &B) -> Result<CampaignRun, ProbeError>
where
    B: QueryBackend + ?Sized,
{
    campaign.validate()?;
    let mut sizes = Vec::with_capacity(campaign.n_hi - campaign.n_lo + 1);
    for n in campaign.n_lo..=campaign.n_hi {
        let (queries, exhausted) = campaign.draw_queries(n)?;
        // Queries past a known failure are skipped. Everything before the
        // first failure is always counted, so the kept prefix is the same
        // under any schedule.
        let first_failure = AtomicUsize::new(usize::MAX);
        let counts: Vec<Option<Result<u64, BackendError>>> = queries
            .par_iter()
            .enumerate()
            .map(|(seq, q)| {
                if seq > first_failure.load(Ordering::Relaxed) {
                    return None;
                }
                let count = backend.count(q);
                if count.is_err() {
                    first_failure.fetch_min(seq, Ordering::Relaxed);
                }
                Some(count)
            })
            .collect();

        let mut records = Vec::with_capacity(queries.len());
        let mut status = if exhausted {
            RunStatus::Exhausted { requested: campaign.queries_per_n, realized: queries.len() }
        } else {
            RunStatus::Complete
        };
        for (seq, (query, count)) in queries.into_iter().zip(counts).enumerate() {
            match count.expect("queries before the first failure are always counted") {
                Ok(e) => records.push(QueryRecord { n, query, e, sequence_no: seq }),
                Err(error) => {
                    status = RunStatus::Aborted { sequence_no: seq, error };
                    break;
                }
            }
        }
        sizes.push(SizeRun { n, records, status });
    }
    Ok(CampaignRun { backend_id: campaign.backend_id.clone(), sizes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Corpus;

    #[test]
    fn single_letter_alphabet() {
        let a = Alphabet::lowercase(1).unwrap();
        let mut rng = stream(0, Domain::Query, 3, 0);
        assert_eq!(random_string(3, &a, &mut rng).unwrap(), "aaa");
        assert_eq!(random_string(0, &a, &mut rng), Err(ProbeError::InvalidQueryLength));
    }

    #[test]
    fn same_address_same_query() {
        let c = Campaign { seed: 17, ..Campaign::default() };
        assert_eq!(c.query(5, 123).unwrap(), c.query(5, 123).unwrap());
        assert_ne!(c.query(5, 123).unwrap(), c.query(5, 124).unwrap());
    }

    #[test]
    fn exhaustive_binary_example() {
        let alphabet = Alphabet::lowercase(2).unwrap();
        let corpus = Corpus::from_documents(alphabet.clone(), [["aa"]]).unwrap();
        let index = Index::build(&corpus);
        let campaign =
            Campaign { n_lo: 2, n_hi: 2, queries_per_n: 3, alphabet, ..Campaign::default() };
        let run = run_campaign(&campaign, &index).unwrap();
        let size = &run.sizes[0];
        assert_eq!(size.records.len(), 3);
        assert_eq!(size.status, RunStatus::Complete);
        for r in &size.records {
            assert_eq!(r.e, u64::from(r.query == "aa"));
            assert_eq!(r.query.len(), 2);
        }
    }

    #[test]
    fn dedup_exhausts_tiny_space() {
        let alphabet = Alphabet::lowercase(1).unwrap();
        let index = Index::build(&Corpus::empty(alphabet.clone()));
        let campaign = Campaign {
            n_lo: 2,
            n_hi: 2,
            queries_per_n: 5,
            dedup: true,
            alphabet,
            ..Campaign::default()
        };
        let run = run_campaign(&campaign, &index).unwrap();
        assert_eq!(run.sizes[0].records.len(), 1);
        assert_eq!(run.sizes[0].records[0].query, "aa");
        assert_eq!(run.sizes[0].status, RunStatus::Exhausted { requested: 5, realized: 1 });
    }

    #[test]
    fn dedup_yields_distinct_queries() {
        let alphabet = Alphabet::lowercase(3).unwrap();
        let index = Index::build(&Corpus::empty(alphabet.clone()));
        let campaign = Campaign {
            n_lo: 2,
            n_hi: 2,
            queries_per_n: 9,
            dedup: true,
            alphabet,
            ..Campaign::default()
        };
        let run = run_campaign(&campaign, &index).unwrap();
        let distinct: HashSet<_> = run.sizes[0].records.iter().map(|r| &r.query).collect();
        assert_eq!(distinct.len(), run.sizes[0].records.len());
        assert!(run.sizes[0].records.len() <= 9);
    }

    struct FailsAt(&'static str);

    impl QueryBackend for FailsAt {
        fn count(&self, query: &str) -> Result<u64, BackendError> {
            if query.starts_with(self.0) {
                Err(BackendError::Unavailable("boom".into()))
            } else {
                Ok(7)
            }
        }
    }

    #[test]
    fn backend_failure_aborts_only_that_length() {
        let campaign = Campaign { n_lo: 1, n_hi: 2, queries_per_n: 200, ..Campaign::default() };
        let run = run_campaign(&campaign, &FailsAt("q")).unwrap();
        for size in &run.sizes {
            let RunStatus::Aborted { sequence_no, ref error } = size.status else {
                panic!("expected abort at n={}", size.n);
            };
            assert_eq!(size.records.len(), sequence_no);
            assert!(size.records.iter().all(|r| r.e == 7));
            assert_eq!(error, &BackendError::Unavailable("boom".into()));
        }
        assert!(run.is_partial());
    }

    #[test]
    fn invalid_campaigns() {
        let index = Index::build(&Corpus::empty(Alphabet::default()));
        let bad = [
            Campaign { n_lo: 0, ..Campaign::default() },
            Campaign { n_lo: 3, n_hi: 2, ..Campaign::default() },
            Campaign { queries_per_n: 0, ..Campaign::default() },
        ];
        for c in bad {
            assert!(run_campaign(&c, &index).is_err());
        }
    }

    #[test]
    fn record_csv_layout() {
        let alphabet = Alphabet::lowercase(1).unwrap();
        let corpus = Corpus::from_documents(alphabet.clone(), [["a"]]).unwrap();
        let campaign =
            Campaign { n_lo: 1, n_hi: 2, queries_per_n: 2, alphabet, ..Campaign::default() };
        let run = run_campaign(&campaign, &Index::build(&corpus)).unwrap();
        let mut out = Vec::new();
        run.write_csv(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "n,seq,query,e\n1,0,a,1\n1,1,a,1\n2,0,aa,0\n2,1,aa,0\n");
    }
}
