//! Estimators over campaign records.

mod crossover;
mod histogram;
mod moments;
mod null;
mod tail;

use std::io::Write;

use thiserror::Error;

use crate::fmt::sig6;
use crate::probe::{CampaignRun, SizeRun};

pub use crossover::{estimate_nc, CrossoverFit, CrossoverMethod, DEFAULT_THRESHOLD};
pub use histogram::{Bin, LogHistogram};
pub use moments::{mean, order_parameter, susceptibility, OrderParameter};
pub use null::{analytic_crossing, analytic_null_p, fss_fit, null_p, FssFit, NullModel};
pub use tail::{
    default_cutoff, hill_continuous, quantile_cutoff, tail_exponent, TailFit,
    DEFAULT_CUTOFF_QUANTILE, MIN_TAIL_POINTS,
};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum StatsError {
    #[error("empty sample")]
    EmptySample,
    #[error("tail has {found} points at or above the cutoff, need {needed}")]
    InsufficientTail { needed: usize, found: usize },
    #[error("all tail values are equal")]
    DegenerateTail,
    #[error("the curve never crosses the threshold downward")]
    NoCrossing,
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Per-length aggregate of one campaign.
#[derive(Debug, Clone, PartialEq)]
pub struct CampaignSummary {
    pub n: usize,
    pub q: usize,
    pub p: f64,
    pub p_stderr: f64,
    pub r: f64,
    pub mean_e: f64,
    pub zero_count: u64,
    pub histogram: LogHistogram,
}

impl CampaignSummary {
    pub fn from_values(n: usize, e: &[u64]) -> Result<Self, StatsError> {
        let op = order_parameter(e)?;
        let histogram = LogHistogram::from_values(e);
        Ok(Self {
            n,
            q: e.len(),
            p: op.p,
            p_stderr: op.stderr,
            r: susceptibility(e)?,
            mean_e: mean(e)?,
            zero_count: histogram.zero_count,
            histogram,
        })
    }

    pub fn from_size(size: &SizeRun) -> Result<Self, StatsError> {
        Self::from_values(size.n, &size.e_values())
    }

    /// One summary per length that produced at least one record.
    pub fn from_run(run: &CampaignRun) -> Vec<Self> {
        run.sizes.iter().filter_map(|s| Self::from_size(s).ok()).collect()
    }
}

/// `(N, P)` pairs of a list of summaries, for [`estimate_nc`].
pub fn p_curve(summaries: &[CampaignSummary]) -> Vec<(usize, f64)> {
    summaries.iter().map(|s| (s.n, s.p)).collect()
}

/// Summary CSV. `nc_flag` is 1 on the two rows that bracket the crossover
/// (when one was found), 0 elsewhere.
pub fn write_summary_csv<W: Write>(
    summaries: &[CampaignSummary],
    crossover: Option<&CrossoverFit>,
    mut out: W,
) -> std::io::Result<()> {
    writeln!(out, "n,q,p,p_se,r,mean_e,zero_count,nc_flag")?;
    for s in summaries {
        let flag = crossover.is_some_and(|c| s.n == c.lower_n || s.n == c.upper_n);
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            s.n,
            s.q,
            sig6(s.p),
            sig6(s.p_stderr),
            sig6(s.r),
            sig6(s.mean_e),
            s.zero_count,
            u8::from(flag)
        )?;
    }
    out.flush()
}

/// Histogram CSV: header `n,bin_lo,bin_hi,count`; bins are half-open
/// `[bin_lo, bin_hi)`, the first row per length is the `[0, 1)` zero bin.
pub fn write_histogram_csv<W: Write>(summaries: &[CampaignSummary], mut out: W) -> std::io::Result<()> {
    writeln!(out, "n,bin_lo,bin_hi,count")?;
    for s in summaries {
        s.histogram.write_rows(s.n, &mut out)?;
    }
    out.flush()
}
