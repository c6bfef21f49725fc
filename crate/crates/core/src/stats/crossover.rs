use super::StatsError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossoverMethod {
    LinearInterpolation,
    /// Closed-form crossing of the null-model curve.
    Analytic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossoverFit {
    pub n_c: f64,
    pub threshold: f64,
    pub method: CrossoverMethod,
    /// Last length with `p >= threshold` before the crossing.
    pub lower_n: usize,
    /// First length with `p < threshold` after it.
    pub upper_n: usize,
    /// The curve climbs back above the threshold later on.
    pub ambiguous: bool,
}

pub const DEFAULT_THRESHOLD: f64 = 0.5;

/// Locates the first downward crossing of `threshold` by linear
/// interpolation. `curve` holds `(N, p)` pairs with strictly increasing `N`.
pub fn estimate_nc(curve: &[(usize, f64)], threshold: f64) -> Result<CrossoverFit, StatsError> {
    if curve.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(StatsError::InvalidInput("curve lengths must be strictly increasing".into()));
    }
    let i = curve
        .windows(2)
        .position(|w| w[0].1 >= threshold && w[1].1 < threshold)
        .ok_or(StatsError::NoCrossing)?;
    let (n0, p0) = curve[i];
    let (n1, p1) = curve[i + 1];
    let n_c = n0 as f64 + (p0 - threshold) / (p0 - p1) * (n1 - n0) as f64;
    let ambiguous = curve[i + 2..].iter().any(|&(_, p)| p >= threshold);
    Ok(CrossoverFit {
        n_c,
        threshold,
        method: CrossoverMethod::LinearInterpolation,
        lower_n: n0,
        upper_n: n1,
        ambiguous,
    })
}
