use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use super::StatsError;

/// Published percentile summary of a wage distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Percentiles {
    pub p10: f64,
    pub p25: f64,
    pub p50: f64,
    pub p75: f64,
    pub p90: f64,
}

impl Percentiles {
    pub fn as_array(&self) -> [f64; 5] {
        [self.p10, self.p25, self.p50, self.p75, self.p90]
    }

    pub fn is_ordered(&self) -> bool {
        let a = self.as_array();
        a.windows(2).all(|w| w[0] <= w[1])
    }
}

/// One row of an OEWS-style wage table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WageStatRow {
    pub mean: f64,
    /// Percent relative standard error of `mean`.
    pub prse: f64,
    pub percentiles: Percentiles,
}

impl WageStatRow {
    pub fn validate(&self, region: &str) -> Result<(), StatsError> {
        if self.prse < 0.0 {
            return Err(StatsError::NegativePrse(self.prse));
        }
        if !self.percentiles.is_ordered() {
            return Err(StatsError::UnorderedPercentiles(region.to_string()));
        }
        Ok(())
    }
}

/// Standard normal quantile z with P(|Z| <= z) = level.
pub fn normal_two_sided_quantile(level: f64) -> Result<f64, StatsError> {
    if !(level > 0.0 && level < 1.0) {
        return Err(StatsError::InvalidLevel(level));
    }
    let n = Normal::new(0.0, 1.0).expect("standard normal");
    Ok(n.inverse_cdf(0.5 + 0.5 * level))
}

/// Normal-theory interval around a published mean, reading `prse` as the
/// percent relative standard error: half-width = z(level) * prse/100 * mean.
pub fn ci_from_prse(mean: f64, prse: f64, level: f64) -> Result<(f64, f64), StatsError> {
    if prse < 0.0 || prse.is_nan() {
        return Err(StatsError::NegativePrse(prse));
    }
    let z = normal_two_sided_quantile(level)?;
    let half = z * (prse / 100.0) * mean.abs();
    Ok((mean - half, mean + half))
}
