use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, Discrete, DiscreteCDF, Poisson};

use super::runner::TrialRecord;
use crate::{Error, Result};

/// Fewest trials accepted by [`poisson_gof`].
pub const MIN_GOF_TRIALS: usize = 500;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GofBin {
    /// Smallest count in the bin.
    pub from: u64,
    /// Largest count in the bin; `None` for the open tail.
    pub to: Option<u64>,
    pub observed: usize,
    pub expected: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GofReport {
    pub trials: usize,
    pub lambda: f64,
    /// Count → number of trials.
    pub empirical: BTreeMap<u64, usize>,
    /// Total variation distance, including the Poisson mass beyond the largest
    /// observed count.
    pub tv: f64,
    pub chi_square: f64,
    pub dof: usize,
    /// Upper tail of the chi-square statistic; `None` with a single bin.
    pub p_value: Option<f64>,
    pub bins: Vec<GofBin>,
}

/// Compares integer counts with Poisson(`lambda`).
///
/// Chi-square bins are grown from 0 until their expected count reaches 5; the
/// last bin is the open tail and is merged into its neighbour if too small.
pub fn poisson_gof(counts: &[u64], lambda: f64) -> Result<GofReport> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::invalid(format!("lambda must be positive, got {lambda}")));
    }
    let trials = counts.len();
    if trials < MIN_GOF_TRIALS {
        return Err(Error::InsufficientTrials {
            needed: MIN_GOF_TRIALS,
            got: trials,
        });
    }
    let pois = Poisson::new(lambda).map_err(|e| Error::invalid(e.to_string()))?;
    let mut empirical = BTreeMap::new();
    for &k in counts {
        *empirical.entry(k).or_insert(0usize) += 1;
    }
    let top = *empirical.keys().next_back().expect("nonempty");
    let t = trials as f64;

    let mut tv = 0.0;
    for k in 0..=top {
        let emp = empirical.get(&k).copied().unwrap_or(0) as f64 / t;
        tv += (emp - pois.pmf(k)).abs();
    }
    tv += pois.sf(top);
    let tv = (tv / 2.0).clamp(0.0, 1.0);

    let mut bins: Vec<GofBin> = Vec::new();
    let mut from = 0u64;
    let mut observed = 0usize;
    let mut expected = 0.0;
    // stop opening bins once the remaining tail cannot reach 5 on its own
    let mut k = 0u64;
    loop {
        let tail_after = pois.sf(k) * t;
        observed += empirical.get(&k).copied().unwrap_or(0);
        expected += pois.pmf(k) * t;
        if expected >= 5.0 && tail_after >= 5.0 {
            bins.push(GofBin { from, to: Some(k), observed, expected });
            from = k + 1;
            observed = 0;
            expected = 0.0;
        } else if tail_after < 5.0 {
            break;
        }
        k += 1;
    }
    let tail_observed = observed + empirical.range(k + 1..).map(|(_, &c)| c).sum::<usize>();
    let tail_expected = expected + pois.sf(k) * t;
    if tail_expected >= 5.0 || bins.is_empty() {
        bins.push(GofBin { from, to: None, observed: tail_observed, expected: tail_expected });
    } else {
        let last = bins.last_mut().expect("nonempty");
        last.to = None;
        last.observed += tail_observed;
        last.expected += tail_expected;
    }

    let chi_square = bins
        .iter()
        .map(|b| (b.observed as f64 - b.expected).powi(2) / b.expected)
        .sum();
    let dof = bins.len() - 1;
    let p_value = (dof > 0).then(|| {
        ChiSquared::new(dof as f64)
            .map(|d| d.sf(chi_square))
            .unwrap_or(f64::NAN)
    });
    Ok(GofReport {
        trials,
        lambda,
        empirical,
        tv,
        chi_square,
        dof,
        p_value,
        bins,
    })
}

/// [`poisson_gof`] on the successful records of a count experiment.
pub fn poisson_gof_records(records: &[TrialRecord], lambda: f64) -> Result<GofReport> {
    let counts: Vec<u64> = records
        .iter()
        .filter_map(|r| r.value)
        .map(|v| u64::try_from(v).unwrap_or(u64::MAX))
        .collect();
    poisson_gof(&counts, lambda)
}
