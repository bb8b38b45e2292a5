//! Length predictions and thresholds.

use super::{expected_extension, expected_extension_bounds, ln_binomial, ln_factorial, Band};

fn check_p(p: f64) {
    assert!(p > 0.0 && p < 1.0, "p must lie in (0, 1), got {p}");
}

/// Band for constant `p`:
/// `n / (upper sandwich of E X) ≤ ℓ_max ≤ n (1/r + 1/(r(r - 2 + 1/p)))`.
pub fn dense_band(n: f64, r: usize, p: f64) -> Band {
    check_p(p);
    let rf = r as f64;
    let lower = n / expected_extension_bounds(r, p).upper;
    let upper = n * (1.0 / rf + 1.0 / (rf * (rf - 2.0 + 1.0 / p)));
    Band::new(
        lower,
        upper,
        &[
            "lower = n / (r - p - r(1-p)^r + (pr+1)(1-p)^r p^-2)",
            "upper = n (1/r + 1/(r(r-2+1/p)))",
        ],
    )
}

/// Expected greedy step count from renewal accounting:
/// `(n-1)/E X - 1 ≤ E K ≤ (n-1)/E X`.
pub fn greedy_accounting_band(n: f64, r: usize, p: f64) -> Band {
    let ex = expected_extension(r, p, 1e-12).value;
    let hi = (n - 1.0) / ex;
    Band::new(
        (hi - 1.0).max(0.0),
        hi,
        &["(n-1)/E X - 1 <= E K <= (n-1)/E X"],
    )
}

/// Length above which paths are a.a.s. absent:
/// `4^{1/(r-1)} e / (r-1) · n p^{1/(r-1)}`.
pub fn first_moment_length(n: f64, r: usize, p: f64) -> f64 {
    check_p(p);
    let k = (r - 1) as f64;
    4f64.powf(1.0 / k) * std::f64::consts::E / k * n * p.powf(1.0 / k)
}

/// Length below which paths a.a.s. exist in the lower middle range:
/// `n p^{1/(r-1)} / (8(r-1)) - 1/(r-1)`, floored at 0.
pub fn second_moment_length(n: f64, r: usize, p: f64) -> f64 {
    check_p(p);
    let k = (r - 1) as f64;
    (n * p.powf(1.0 / k) / (8.0 * k) - 1.0 / k).max(0.0)
}

/// Span `d = (r-1)(2 ln n / p)^{1/(r-1)}` within which every vertex
/// `v ≤ n - d` a.a.s. has an outgoing edge.
pub fn short_extension_span(n: f64, r: usize, p: f64) -> f64 {
    let k = (r - 1) as f64;
    k * (2.0 * n.ln() / p).powf(1.0 / k)
}

/// `ln E X_ℓ` where `X_ℓ` counts ordered loose paths of length `ℓ`:
/// `E X_ℓ = C(n, ℓ(r-1)+1) p^ℓ`.
pub fn ln_expected_path_count(n: f64, r: usize, p: f64, ell: u64) -> f64 {
    let s = (ell * (r as u64 - 1) + 1) as f64;
    ln_binomial(n, s) + ell as f64 * p.ln()
}

pub fn expected_path_count(n: f64, r: usize, p: f64, ell: u64) -> f64 {
    ln_expected_path_count(n, r, p, ell).exp()
}

/// Limiting Poisson mean `c^ℓ / (ℓ(r-1)+1)!` of the length-`ℓ` path count at
/// `p = c n^{-(r-1+1/ℓ)}`.
pub fn poisson_lambda(c: f64, r: usize, ell: u64) -> f64 {
    assert!(c > 0.0 && ell >= 1);
    let s = (ell * (r as u64 - 1) + 1) as f64;
    (ell as f64 * c.ln() - ln_factorial(s)).exp()
}

/// `(n^{-(r-1+1/ℓ)}, n^{-(r-1+1/(ℓ+1))})`: strictly inside this window,
/// `ℓ_max = ℓ` a.a.s.
pub fn sparse_window(n: f64, r: usize, ell: u64) -> (f64, f64) {
    assert!(ell >= 1);
    let k = (r - 1) as f64;
    let lo = n.powf(-(k + 1.0 / ell as f64));
    let hi = n.powf(-(k + 1.0 / (ell as f64 + 1.0)));
    (lo, hi)
}

/// Upper bound `(n + 1/p)/(r - 2 + 1/p)` on the expected size of the largest
/// union of loose paths built from unit-length edges.
pub fn unit_union_bound(n: f64, r: usize, p: f64) -> f64 {
    (n + 1.0 / p) / (r as f64 - 2.0 + 1.0 / p)
}
