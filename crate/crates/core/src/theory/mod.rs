//! Closed-form predictions for `ℓ_max` and related quantities.
//!
//! Everything here is a pure function of `(n, r, p)` and friends. Lengths are
//! edge counts.

mod bands;
mod ell0;
mod regime;
mod series;

use serde::{Deserialize, Serialize};

pub use bands::{
    dense_band, expected_path_count, first_moment_length, greedy_accounting_band,
    poisson_lambda, second_moment_length, short_extension_span, sparse_window,
    unit_union_bound, ln_expected_path_count,
};
pub use ell0::{log_regime_f, solve_log_regime_length, Ell0Root};
pub use regime::{classify_regime, classify_regime_with, Regime, RegimeCutoffs, RegimePrediction};
pub use series::{
    edge_at_offset, expected_extension, expected_extension_bounds, expected_extension_terms,
    no_edge_before, one_minus_pow_one_minus, pow_one_minus, ExpectationResult,
};

/// Closed interval of predicted values, with the formulas that produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub lower: f64,
    pub upper: f64,
    pub provenance: Vec<String>,
}

impl Band {
    pub fn new(lower: f64, upper: f64, provenance: &[&str]) -> Self {
        debug_assert!(lower <= upper, "band [{lower}, {upper}] is inverted");
        Self {
            lower,
            upper,
            provenance: provenance.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            lower: self.lower * factor,
            upper: self.upper * factor,
            provenance: self.provenance.clone(),
        }
    }
}

/// `ln Γ(x + 1)` for `x ≥ 0`.
pub fn ln_factorial(x: f64) -> f64 {
    if x < 2.0 {
        return 0.0;
    }
    if x <= 256.0 && x.fract() == 0.0 {
        return (2..=x as u64).map(|k| (k as f64).ln()).sum();
    }
    statrs::function::gamma::ln_gamma(x + 1.0)
}

/// `ln C(n, k)` for real `0 ≤ k ≤ n`.
pub fn ln_binomial(n: f64, k: f64) -> f64 {
    if k < 0.0 || k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    if k == 0.0 {
        return 0.0;
    }
    if k <= 64.0 && k.fract() == 0.0 {
        // direct product is more accurate than three ln_gamma calls
        return (0..k as u64)
            .map(|j| ((n - j as f64) / (k - j as f64)).ln())
            .sum();
    }
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// `C(n, k)` as a float; exact for small arguments.
pub fn binomial_f64(n: f64, k: f64) -> f64 {
    if k < 0.0 || k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    if k <= 64.0 && k.fract() == 0.0 {
        let mut c = 1.0f64;
        for j in 0..k as u64 {
            c = c * (n - j as f64) / (j as f64 + 1.0);
        }
        // integral n: drop the rounding residue while the value is exact
        return if n.fract() == 0.0 && c < 9.0e15 { c.round() } else { c };
    }
    ln_binomial(n, k).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial_f64(5.0, 2.0), 10.0);
        assert_eq!(binomial_f64(60.0, 3.0), 34220.0);
        assert_eq!(binomial_f64(3.0, 0.0), 1.0);
        assert_eq!(binomial_f64(1.0, 2.0), 0.0);
        assert_eq!(binomial_f64(1.0, -1.0), 0.0);
        assert!((ln_binomial(100.0, 50.0) - 66.78384).abs() < 1e-4);
        assert!((ln_binomial(1e5, 2.0) - (4_999_950_000f64).ln()).abs() < 1e-12);
        assert!((ln_factorial(5.0) - 120f64.ln()).abs() < 1e-14);
        assert!((ln_factorial(300.0) - statrs::function::gamma::ln_gamma(301.0)).abs() < 1e-9);
    }
}
