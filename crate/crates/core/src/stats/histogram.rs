use std::io::Write;

/// Base-2 logarithmic histogram of result counts; zeros are kept apart.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LogHistogram {
    pub zero_count: u64,
    /// Bin `k` covers `[2^k, 2^(k+1))`; trailing empty bins are omitted,
    /// interior empty bins are kept.
    pub counts: Vec<u64>,
    pub total: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bin {
    pub lower: u64,
    pub upper: u64,
    pub count: u64,
}

impl LogHistogram {
    pub fn from_values(e: &[u64]) -> Self {
        let mut h = LogHistogram::default();
        for &x in e {
            h.total += 1;
            if x == 0 {
                h.zero_count += 1;
                continue;
            }
            let k = x.ilog2() as usize;
            if h.counts.len() <= k {
                h.counts.resize(k + 1, 0);
            }
            h.counts[k] += 1;
        }
        h
    }

    pub fn bins(&self) -> impl Iterator<Item = Bin> + '_ {
        self.counts.iter().enumerate().map(|(k, &count)| Bin {
            lower: 1u64 << k,
            upper: 1u64.checked_shl(k as u32 + 1).unwrap_or(u64::MAX),
            count,
        })
    }

    /// Per-unit-width density of `[2, 4)` relative to `[1, 2)`. A flat
    /// (uniform-like) head gives 1; a power-law head falls below 1.
    pub fn head_flatness(&self) -> Option<f64> {
        match self.counts.as_slice() {
            [first, second, ..] if *first > 0 => Some((*second as f64 / 2.0) / *first as f64),
            _ => None,
        }
    }

    /// Rows of the histogram CSV for length `n`: a `[0, 1)` row holding the
    /// zero count, then one row per log bin.
    pub fn write_rows<W: Write>(&self, n: usize, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "{n},0,1,{}", self.zero_count)?;
        for bin in self.bins() {
            writeln!(out, "{n},{},{},{}", bin.lower, bin.upper, bin.count)?;
        }
        Ok(())
    }
}
