use super::StatsError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderParameter {
    pub p: f64,
    /// Binomial standard error `sqrt(p(1-p)/q)`.
    pub stderr: f64,
}

/// Fraction of queries with a nonzero result count.
pub fn order_parameter(e: &[u64]) -> Result<OrderParameter, StatsError> {
    if e.is_empty() {
        return Err(StatsError::EmptySample);
    }
    let q = e.len() as f64;
    let hits = e.iter().filter(|&&x| x > 0).count() as f64;
    let p = hits / q;
    Ok(OrderParameter { p, stderr: (p * (1.0 - p) / q).sqrt() })
}

/// Normalized variance `(<E^2> - <E>^2) / <E>^2`, defined as 0 when
/// `<E> = 0`.
///
/// The moments are accumulated as exact integers, so the numerator
/// `q·ΣE² − (ΣE)²` never goes negative through cancellation.
pub fn susceptibility(e: &[u64]) -> Result<f64, StatsError> {
    if e.is_empty() {
        return Err(StatsError::EmptySample);
    }
    let q = e.len() as u128;
    let s1: u128 = e.iter().map(|&x| x as u128).sum();
    if s1 == 0 {
        return Ok(0.0);
    }
    let s2: u128 = e.iter().map(|&x| (x as u128) * (x as u128)).sum();
    let numerator = q * s2 - s1 * s1;
    Ok(numerator as f64 / (s1 as f64 * s1 as f64))
}

pub fn mean(e: &[u64]) -> Result<f64, StatsError> {
    if e.is_empty() {
        return Err(StatsError::EmptySample);
    }
    Ok(e.iter().map(|&x| x as f64).sum::<f64>() / e.len() as f64)
}
