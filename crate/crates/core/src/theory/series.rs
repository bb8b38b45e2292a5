//! The extension length `X`: span of the shortest edge leaving a vertex when
//! every candidate tuple is present independently with probability `p`.
//!
//! With offset `i = X - (r - 1)`, the probability that no candidate tuple
//! ends before offset `i` is `q_i = (1-p)^C(r-2+i, r-1)`, and the probability
//! that some tuple ends exactly at offset `i` is
//! `p_i = 1 - (1-p)^C(r-2+i, r-2)`. `Pr(X = r-1+i) = q_i p_i`.

use serde::{Deserialize, Serialize};

use super::{binomial_f64, Band};

/// `(1 - p)^exponent`, exactly 0 on underflow and for `p = 1`.
pub fn pow_one_minus(p: f64, exponent: f64) -> f64 {
    if exponent == 0.0 {
        return 1.0;
    }
    if p >= 1.0 {
        return 0.0;
    }
    (exponent * (-p).ln_1p()).exp()
}

/// `1 - (1 - p)^exponent` without cancellation for tiny `p`.
pub fn one_minus_pow_one_minus(p: f64, exponent: f64) -> f64 {
    if exponent == 0.0 {
        return 0.0;
    }
    if p >= 1.0 {
        return 1.0;
    }
    -(exponent * (-p).ln_1p()).exp_m1()
}

/// `q_i`: no edge from the base vertex ends at an offset below `i`.
pub fn no_edge_before(r: usize, p: f64, i: u64) -> f64 {
    pow_one_minus(p, binomial_f64((r - 2) as f64 + i as f64, (r - 1) as f64))
}

/// `p_i`: at least one edge from the base vertex ends exactly at offset `i`.
pub fn edge_at_offset(r: usize, p: f64, i: u64) -> f64 {
    one_minus_pow_one_minus(p, binomial_f64((r - 2) as f64 + i as f64, (r - 2) as f64))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpectationResult {
    pub value: f64,
    /// Index of the last summed term.
    pub truncation_index: u64,
    /// Rigorous bound on the omitted tail.
    pub tail_bound: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub terms: Option<Vec<f64>>,
}

/// `E X = Σ_i (r-1+i) q_i p_i`, summed until a geometric tail bound drops
/// below `tol`.
///
/// The dominating terms `t_i = (r-1+i) q_i` have non-increasing successive
/// ratios `ρ_i = t_{i+1}/t_i`, so once `ρ_i < 1` the tail after `i` is at most
/// `t_{i+1}/(1 - ρ_i)`.
pub fn expected_extension(r: usize, p: f64, tol: f64) -> ExpectationResult {
    expected_extension_impl(r, p, tol, false)
}

/// Same as [`expected_extension`], keeping the individual terms `E X_i`.
pub fn expected_extension_terms(r: usize, p: f64, tol: f64) -> ExpectationResult {
    expected_extension_impl(r, p, tol, true)
}

fn expected_extension_impl(r: usize, p: f64, tol: f64, keep: bool) -> ExpectationResult {
    assert!(r >= 2, "uniformity must be at least 2");
    assert!(p > 0.0 && p <= 1.0, "p must lie in (0, 1]");
    assert!(tol > 0.0, "tolerance must be positive");
    let base = (r - 1) as f64;
    let mut terms = keep.then(Vec::new);
    // Neumaier summation; up to ~1e6 terms for tiny p
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut i: u64 = 0;
    loop {
        let q = no_edge_before(r, p, i);
        let term = (base + i as f64) * q * edge_at_offset(r, p, i);
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        if let Some(ts) = terms.as_mut() {
            ts.push(term);
        }
        let q_next = no_edge_before(r, p, i + 1);
        let t_next = (base + i as f64 + 1.0) * q_next;
        if t_next == 0.0 {
            return ExpectationResult {
                value: sum + comp,
                truncation_index: i,
                tail_bound: 0.0,
                terms,
            };
        }
        let t_cur = (base + i as f64) * q;
        let rho = t_next / t_cur;
        if rho < 1.0 {
            let tail = t_next / (1.0 - rho);
            if tail < tol {
                return ExpectationResult {
                    value: sum + comp,
                    truncation_index: i,
                    tail_bound: tail,
                    terms,
                };
            }
        }
        i += 1;
    }
}

/// The two-term sandwich `r - p - r(1-p)^r ≤ E X ≤ that + (pr+1)(1-p)^r / p²`.
pub fn expected_extension_bounds(r: usize, p: f64) -> Band {
    let rf = r as f64;
    let tail_free = pow_one_minus(p, rf);
    let lower = rf - p - rf * tail_free;
    let upper = lower + (p * rf + 1.0) * tail_free / (p * p);
    Band::new(
        lower,
        upper,
        &[
            "E X >= r - p - r(1-p)^r",
            "E X <= r - p - r(1-p)^r + (pr+1)(1-p)^r p^-2",
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn term_probabilities() {
        for r in 2..8 {
            for p in [0.01, 0.3, 0.5, 0.99] {
                assert_eq!(no_edge_before(r, p, 0), 1.0);
            }
        }
        for i in 0..20 {
            assert!((edge_at_offset(2, 0.37, i) - 0.37).abs() < 1e-15);
        }
        assert!((no_edge_before(3, 0.5, 2) - 0.125).abs() < 1e-15);
        assert_eq!(no_edge_before(3, 1.0, 1), 0.0);
        assert_eq!(edge_at_offset(3, 1.0, 0), 1.0);
    }

    #[test]
    fn tiny_p_is_stable() {
        // 1 - (1 - 1e-15)^1 computed naively loses everything
        assert!((edge_at_offset(2, 1e-15, 0) / 1e-15 - 1.0).abs() < 1e-12);
        // (1-p)^C with C ~ 5e9 underflows to exactly 0
        assert_eq!(no_edge_before(3, 0.5, 100_000), 0.0);
    }

    #[test]
    fn recurrence() {
        for r in 2..7 {
            for p in [0.05, 0.2, 0.5, 0.8] {
                for i in 1..=50 {
                    let lhs = no_edge_before(r, p, i);
                    let rhs = no_edge_before(r, p, i - 1) * (1.0 - edge_at_offset(r, p, i - 1));
                    assert!((lhs - rhs).abs() <= 1e-12, "r={r} p={p} i={i}");
                }
            }
        }
    }

    #[test]
    fn p_one_is_r_minus_one() {
        for r in 2..10 {
            let res = expected_extension(r, 1.0, 1e-12);
            assert_eq!(res.value, (r - 1) as f64);
            assert_eq!(res.truncation_index, 0);
            let b = expected_extension_bounds(r, 1.0);
            assert_eq!((b.lower, b.upper), ((r - 1) as f64, (r - 1) as f64));
        }
    }

    #[test]
    fn sandwich_values() {
        let b = expected_extension_bounds(3, 0.5);
        assert!((b.lower - 2.125).abs() < 1e-15);
        assert!((b.upper - 3.375).abs() < 1e-15);
    }

    #[test]
    fn terms_sum_to_value() {
        let res = expected_extension_terms(3, 0.5, 1e-14);
        let terms = res.terms.as_ref().unwrap();
        assert_eq!(terms.len() as u64, res.truncation_index + 1);
        // by hand: 1 + 9/8 + 7/16 + 75/1024 + ...
        assert!((terms[0] - 1.0).abs() < 1e-15);
        assert!((terms[1] - 1.125).abs() < 1e-15);
        assert!((terms[2] - 0.4375).abs() < 1e-15);
        assert!((terms.iter().sum::<f64>() - res.value).abs() < 1e-12);
        assert!(res.tail_bound < 1e-14);
    }
}
