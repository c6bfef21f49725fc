//! Analytic null model: a reservoir of i.i.d. uniform random tokens, and the
//! finite-size fit of the crossover point against reservoir size.

use std::collections::BTreeMap;

use super::StatsError;

#[derive(Debug, Clone, PartialEq)]
enum TokenCounts {
    Constant(u64),
    PerLength(BTreeMap<usize, u64>),
}

/// Alphabet size `A` and per-length token count `T_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct NullModel {
    alphabet_size: u64,
    counts: TokenCounts,
}

impl NullModel {
    /// The same `T` tokens at every length.
    pub fn constant(alphabet_size: u64, tokens: u64) -> Self {
        assert!(alphabet_size >= 1, "alphabet size must be at least 1");
        Self { alphabet_size, counts: TokenCounts::Constant(tokens) }
    }

    /// Explicit `T_N`; lengths not listed hold no tokens.
    pub fn per_length(alphabet_size: u64, counts: BTreeMap<usize, u64>) -> Self {
        assert!(alphabet_size >= 1, "alphabet size must be at least 1");
        Self { alphabet_size, counts: TokenCounts::PerLength(counts) }
    }

    pub fn alphabet_size(&self) -> u64 {
        self.alphabet_size
    }

    pub fn tokens_at(&self, n: usize) -> u64 {
        match &self.counts {
            TokenCounts::Constant(t) => *t,
            TokenCounts::PerLength(map) => map.get(&n).copied().unwrap_or(0),
        }
    }

    /// See [`analytic_null_p`].
    pub fn p(&self, n: usize) -> f64 {
        null_p(self.alphabet_size, self.tokens_at(n), n as f64)
    }
}

/// `1 - (1 - A^-N)^(T_N)`: the chance that a uniform random length-`N`
/// query matches at least one of `T_N` i.i.d. uniform length-`N` tokens.
pub fn analytic_null_p(model: &NullModel, n: usize) -> f64 {
    model.p(n)
}

/// The null probability for real-valued `n`, evaluated in log space.
pub fn null_p(alphabet_size: u64, tokens: u64, n: f64) -> f64 {
    if tokens == 0 {
        return 0.0;
    }
    let miss_one = -(-(n * (alphabet_size as f64).ln())).exp(); // -A^-N
    if miss_one <= -1.0 {
        return 1.0;
    }
    -(tokens as f64 * miss_one.ln_1p()).exp_m1()
}

/// Real `N` at which the null curve for `tokens` crosses `threshold`:
/// `N = -ln(1 - (1 - threshold)^(1/T)) / ln A`. `None` when the curve is
/// flat (`T = 0` or `A = 1`).
pub fn analytic_crossing(alphabet_size: u64, tokens: u64, threshold: f64) -> Option<f64> {
    if tokens == 0 || alphabet_size < 2 || !(0.0 < threshold && threshold < 1.0) {
        return None;
    }
    let gap = -((1.0 - threshold).ln() / tokens as f64).exp_m1();
    Some(-gap.ln() / (alphabet_size as f64).ln())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FssFit {
    pub slope: f64,
    pub intercept: f64,
    pub points: usize,
}

/// Least-squares fit of `n_c` against `log_A(T_N)` over `(T_N, n_c)` points.
pub fn fss_fit(points: &[(f64, f64)], alphabet_size: u64) -> Result<FssFit, StatsError> {
    if alphabet_size < 2 {
        return Err(StatsError::InvalidInput("alphabet size must be at least 2".into()));
    }
    if points.iter().any(|&(t, n)| !(t > 0.0 && t.is_finite() && n.is_finite())) {
        return Err(StatsError::InvalidInput("sizes must be positive and n_c finite".into()));
    }
    let mut sizes: Vec<f64> = points.iter().map(|p| p.0).collect();
    sizes.sort_by(f64::total_cmp);
    sizes.dedup();
    if sizes.len() < 2 {
        return Err(StatsError::InsufficientData(format!(
            "need at least 2 distinct reservoir sizes, got {}",
            sizes.len()
        )));
    }
    let ln_a = (alphabet_size as f64).ln();
    let xs: Vec<f64> = points.iter().map(|&(t, _)| t.ln() / ln_a).collect();
    let k = points.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(points).map(|(x, p)| (x - mx) * (p.1 - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    Ok(FssFit { slope, intercept: my - slope * mx, points: points.len() })
}
