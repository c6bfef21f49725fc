//! Power-law tail exponent by the Hill maximum-likelihood estimator.
//!
//! Exponents follow the density convention `p(x) ∝ x^-alpha`.

use super::StatsError;

/// Fewest tail points accepted by the estimators.
pub const MIN_TAIL_POINTS: usize = 10;

/// Default cutoff quantile of the positive values.
pub const DEFAULT_CUTOFF_QUANTILE: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailFit {
    pub alpha: f64,
    /// `(alpha - 1) / sqrt(n_tail)`.
    pub stderr: f64,
    pub n_tail: usize,
    pub cutoff: f64,
}

/// Tail exponent of integer result counts `e >= e_min`, treating the
/// discrete sample as continuous with the usual half-unit shift of the
/// cutoff: `alpha = 1 + n / Σ ln(e_i / (e_min - 1/2))`.
pub fn tail_exponent(values: &[u64], e_min: u64) -> Result<TailFit, StatsError> {
    if e_min == 0 {
        return Err(StatsError::InvalidInput("tail cutoff must be at least 1".into()));
    }
    let tail: Vec<f64> = values.iter().filter(|&&e| e >= e_min).map(|&e| e as f64).collect();
    let mut fit = hill(&tail, e_min as f64 - 0.5)?;
    fit.cutoff = e_min as f64;
    Ok(fit)
}

/// Hill estimate for a continuous sample: `alpha = 1 + n / Σ ln(x_i / x_min)`
/// over `x_i >= x_min`.
pub fn hill_continuous(values: &[f64], x_min: f64) -> Result<TailFit, StatsError> {
    if !(x_min > 0.0 && x_min.is_finite()) {
        return Err(StatsError::InvalidInput(format!("x_min must be positive, got {x_min}")));
    }
    let tail: Vec<f64> = values.iter().copied().filter(|&x| x >= x_min).collect();
    hill(&tail, x_min)
}

fn hill(tail: &[f64], scale: f64) -> Result<TailFit, StatsError> {
    if tail.len() < MIN_TAIL_POINTS {
        return Err(StatsError::InsufficientTail { needed: MIN_TAIL_POINTS, found: tail.len() });
    }
    if tail.iter().all(|&x| x == tail[0]) {
        return Err(StatsError::DegenerateTail);
    }
    let n = tail.len() as f64;
    let log_sum: f64 = tail.iter().map(|&x| (x / scale).ln()).sum();
    let alpha = 1.0 + n / log_sum;
    Ok(TailFit { alpha, stderr: (alpha - 1.0) / n.sqrt(), n_tail: tail.len(), cutoff: scale })
}

/// The 90th percentile (nearest rank) of the positive values.
pub fn default_cutoff(values: &[u64]) -> Option<u64> {
    quantile_cutoff(values, DEFAULT_CUTOFF_QUANTILE)
}

pub fn quantile_cutoff(values: &[u64], q: f64) -> Option<u64> {
    let mut positive: Vec<u64> = values.iter().copied().filter(|&e| e > 0).collect();
    if positive.is_empty() {
        return None;
    }
    positive.sort_unstable();
    let rank = ((q * positive.len() as f64).ceil() as usize).clamp(1, positive.len());
    Some(positive[rank - 1])
}
