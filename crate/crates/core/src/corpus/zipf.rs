use rand::Rng;

use super::CorpusError;

/// Normalized Zipf weights `k^-s / sum_j j^-s` for ranks `1..=vocab_size`.
pub fn zipf_probabilities(vocab_size: usize, exponent: f64) -> Result<Vec<f64>, CorpusError> {
    if vocab_size == 0 {
        return Err(CorpusError::InvalidSpec("vocab_size must be at least 1".into()));
    }
    if !(exponent.is_finite() && exponent >= 0.0) {
        return Err(CorpusError::InvalidSpec(format!(
            "zipf_exponent must be a nonnegative real, got {exponent}"
        )));
    }
    let weights: Vec<f64> = (1..=vocab_size).map(|k| (k as f64).powf(-exponent)).collect();
    // Smallest terms first keeps the rounding error of the normalizer tiny.
    let total = neumaier_sum(weights.iter().rev().copied());
    Ok(weights.into_iter().map(|w| w / total).collect())
}

pub(crate) fn neumaier_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Inverse-CDF sampler over ranks (0-based).
#[derive(Debug, Clone)]
pub struct ZipfSampler {
    cdf: Vec<f64>,
}

impl ZipfSampler {
    pub fn new(probabilities: &[f64]) -> Self {
        let mut acc = 0.0;
        let cdf = probabilities
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        Self { cdf }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        self.cdf.partition_point(|&c| c <= u).min(self.cdf.len() - 1)
    }
}
