//! The logarithmic-regime length `ℓ₀`: the root of
//! `f(x) = (n/x)^{r-1+1/x} p = 1`.
//!
//! `ln f` is strictly decreasing on `(0, n)`, so the root is unique when it
//! exists. The search starts from the bracket `[1, 10 ln n]` and, if `f` is
//! still above 1 at the right end, doubles it up to `n`, where `f(n) = p < 1`.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub fn log_regime_f(n: f64, r: usize, p: f64, x: f64) -> f64 {
    ln_f(n, r, p, x).exp()
}

fn ln_f(n: f64, r: usize, p: f64, x: f64) -> f64 {
    ((r - 1) as f64 + 1.0 / x) * (n.ln() - x.ln()) + p.ln()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ell0Root {
    pub root: f64,
    /// Bracket on which bisection started.
    pub bracket: (f64, f64),
    /// `|f(root) - 1|`.
    pub residual: f64,
    pub iterations: u32,
}

const RESIDUAL_TOL: f64 = 1e-9;

pub fn solve_log_regime_length(n: f64, r: usize, p: f64) -> Result<Ell0Root> {
    if !(n > 1.0) || r < 2 || !(p > 0.0 && p < 1.0) {
        return Err(Error::invalid(format!(
            "log-regime length needs n > 1, r >= 2, 0 < p < 1; got n={n}, r={r}, p={p}"
        )));
    }
    let g = |x: f64| ln_f(n, r, p, x);
    let lo = 1.0;
    let mut hi = (10.0 * n.ln()).clamp(lo * 2.0, n);
    if g(lo) <= 0.0 {
        return Err(Error::NoBracket {
            lo,
            hi,
            f_lo: g(lo).exp(),
            f_hi: g(hi).exp(),
        });
    }
    while g(hi) > 0.0 {
        if hi >= n {
            return Err(Error::NoBracket {
                lo,
                hi,
                f_lo: g(lo).exp(),
                f_hi: g(hi).exp(),
            });
        }
        hi = (hi * 2.0).min(n);
    }
    let bracket = (lo, hi);
    let (mut a, mut b) = bracket;
    let mut iterations = 0;
    loop {
        let mid = 0.5 * (a + b);
        let gm = g(mid);
        iterations += 1;
        let residual = gm.exp_m1().abs();
        if residual <= RESIDUAL_TOL * 1e-3 || b - a <= 4.0 * f64::EPSILON * mid || iterations >= 2000 {
            return Ok(Ell0Root {
                root: mid,
                bracket,
                residual,
                iterations,
            });
        }
        if gm > 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
}
