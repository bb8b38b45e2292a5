use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::runner::TrialRecord;
use crate::theory::Band;
use crate::{Error, Result};

/// Default relative widening of a band before it is compared with a CI.
pub const DEFAULT_SLACK: f64 = 0.01;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    /// Successful trials; the histogram sums to this.
    pub trials: usize,
    pub failed: usize,
    pub mean: f64,
    /// Sample standard deviation over `sqrt(trials)`.
    pub std_error: f64,
    /// `mean ± 1.96 std_error`.
    pub ci95: [f64; 2],
    pub min: f64,
    pub max: f64,
    pub histogram: BTreeMap<u128, usize>,
}

impl SummaryStats {
    fn from_parts(values: &[f64], failed: usize, histogram: BTreeMap<u128, usize>) -> Self {
        let k = values.len();
        let mean = values.iter().sum::<f64>() / k as f64;
        let var = if k > 1 {
            values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1) as f64
        } else {
            0.0
        };
        let std_error = (var / k as f64).sqrt();
        Self {
            trials: k,
            failed,
            mean,
            std_error,
            ci95: [mean - 1.96 * std_error, mean + 1.96 * std_error],
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            histogram,
        }
    }
}

/// Summary of the successful records; failures are only counted.
pub fn aggregate(records: &[TrialRecord]) -> Result<SummaryStats> {
    let ok: Vec<u128> = records.iter().filter_map(|r| r.value).collect();
    if ok.is_empty() {
        return Err(Error::AllTrialsFailed(records.len()));
    }
    let mut hist = BTreeMap::new();
    for &v in &ok {
        *hist.entry(v).or_insert(0) += 1;
    }
    let values: Vec<f64> = ok.iter().map(|&v| v as f64).collect();
    Ok(SummaryStats::from_parts(&values, records.len() - ok.len(), hist))
}

/// Summary of real-valued observations; the histogram is left empty.
pub fn summarize(values: &[f64]) -> Result<SummaryStats> {
    if values.is_empty() {
        return Err(Error::AllTrialsFailed(0));
    }
    Ok(SummaryStats::from_parts(values, 0, BTreeMap::new()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BandCheck {
    pub pass: bool,
    pub ci95: [f64; 2],
    /// The band after widening by `slack`.
    pub accepted: [f64; 2],
    pub slack: f64,
    /// Gap between the CI and the widened band; 0 when they overlap.
    pub margin: f64,
}

/// Passes iff the 95% CI meets `[lower (1 - slack), upper (1 + slack)]`.
pub fn band_check(stats: &SummaryStats, band: &Band, slack: f64) -> BandCheck {
    let lo = band.lower * (1.0 - slack);
    let hi = band.upper * (1.0 + slack);
    let [a, b] = stats.ci95;
    let margin = if b < lo {
        lo - b
    } else if a > hi {
        a - hi
    } else {
        0.0
    };
    BandCheck {
        pass: margin == 0.0,
        ci95: stats.ci95,
        accepted: [lo, hi],
        slack,
        margin,
    }
}
