//! Samplers for `H^(r)(n, p)` and for the unit-length block mask.
//!
//! Two explicit strategies share one interface:
//!
//! * **enumerate**: walk all `C(n, r)` tuples in lexicographic order and keep
//!   each with probability `p`;
//! * **sparse**: draw the edge count `m ~ Binomial(C(n, r), p)`, then a
//!   uniformly random set of `m` distinct tuples.
//!
//! Both produce exactly the law of independent per-tuple inclusion.

use rand::distr::{Bernoulli, Distribution};
use rand::Rng;
use rand_distr::{Binomial, Normal, Poisson};

use super::{OrderedHypergraph, UnitEdgeMask};
use crate::rng::RngSeed;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    #[default]
    Auto,
    Enumerate,
    Sparse,
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SampleOptions {
    /// Largest admissible `C(n, r) * p`.
    pub max_expected_edges: f64,
    /// Enumeration is only considered when `C(n, r)` is at most this.
    pub enumerate_limit: f64,
    /// ... and `p` is at least this.
    pub enumerate_min_p: f64,
    pub strategy: Strategy,
}

impl Default for SampleOptions {
    fn default() -> Self {
        Self {
            max_expected_edges: 2.0e7,
            enumerate_limit: 1.0e8,
            enumerate_min_p: 1.0 / 32.0,
            strategy: Strategy::Auto,
        }
    }
}

/// `C(n, r)`, exactly when it fits in 128 bits, always as a natural log.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TupleCount {
    pub exact: Option<u128>,
    pub ln: f64,
}

impl TupleCount {
    pub fn as_f64(&self) -> f64 {
        match self.exact {
            Some(c) => c as f64,
            None => self.ln.exp(),
        }
    }
}

pub fn tuple_count(n: u64, r: u64) -> TupleCount {
    if r > n {
        return TupleCount {
            exact: Some(0),
            ln: f64::NEG_INFINITY,
        };
    }
    let k = r.min(n - r);
    let mut exact = Some(1u128);
    for i in 1..=k as u128 {
        // c * (n - k + i) / i stays integral at every step
        exact = exact.and_then(|c| c.checked_mul(n as u128 - k as u128 + i)).map(|c| c / i);
    }
    TupleCount {
        exact,
        ln: crate::theory::ln_binomial(n as f64, k as f64),
    }
}

/// A draw from `Binomial(trials, p)`.
///
/// Exact when `trials` fits in 64 bits. Beyond that the mean is necessarily
/// tiny relative to `trials`, and a Normal approximation (mean above 1e6) or a
/// Poisson approximation (otherwise) is used.
pub fn binomial_draw<R: Rng + ?Sized>(rng: &mut R, trials: TupleCount, p: f64) -> u64 {
    if p <= 0.0 {
        return 0;
    }
    match trials.exact.and_then(|c| u64::try_from(c).ok()) {
        Some(nt) => {
            if p >= 1.0 {
                return nt;
            }
            Binomial::new(nt, p).expect("valid binomial").sample(rng)
        }
        None => {
            let mean = (trials.ln + p.ln()).exp();
            if mean > 1.0e6 {
                let sd = (mean * (1.0 - p)).sqrt();
                let x: f64 = Normal::new(mean, sd).expect("valid normal").sample(rng);
                x.round().max(0.0) as u64
            } else {
                let x: f64 = Poisson::new(mean).expect("valid poisson").sample(rng);
                x as u64
            }
        }
    }
}

fn check_params(n: u32, r: usize, p: f64) -> Result<()> {
    if r < 2 {
        return Err(Error::invalid(format!("uniformity r must be at least 2, got {r}")));
    }
    if (n as usize) < r {
        return Err(Error::invalid(format!("need n >= r, got n={n}, r={r}")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("p must lie in [0, 1], got {p}")));
    }
    Ok(())
}

/// Samples `H^(r)(n, p)` with the default options.
pub fn sample_explicit(n: u32, r: usize, p: f64, seed: RngSeed) -> Result<OrderedHypergraph> {
    sample_explicit_with(n, r, p, seed, &SampleOptions::default())
}

pub fn sample_explicit_with(
    n: u32,
    r: usize,
    p: f64,
    seed: RngSeed,
    opts: &SampleOptions,
) -> Result<OrderedHypergraph> {
    check_params(n, r, p)?;
    let tuples = tuple_count(n as u64, r as u64);
    let expected = if p == 0.0 { 0.0 } else { (tuples.ln + p.ln()).exp() };
    if expected > opts.max_expected_edges {
        return Err(Error::BudgetExceeded {
            expected,
            budget: opts.max_expected_edges,
        });
    }
    let enumerate = match opts.strategy {
        Strategy::Enumerate => true,
        Strategy::Sparse => false,
        Strategy::Auto => tuples.as_f64() <= opts.enumerate_limit && p >= opts.enumerate_min_p,
    };
    let mut rng = seed.rng();
    let verts = if enumerate {
        enumerate_tuples(&mut rng, n, r, p)
    } else {
        let m = binomial_draw(&mut rng, tuples, p);
        distinct_tuples(&mut rng, n, r, m as usize)
    };
    Ok(OrderedHypergraph::from_sorted_flat(n, r, verts))
}

fn enumerate_tuples<R: Rng + ?Sized>(rng: &mut R, n: u32, r: usize, p: f64) -> Vec<u32> {
    let keep = Bernoulli::new(p).expect("p in [0, 1]");
    let mut out = Vec::new();
    let mut c: Vec<u32> = (1..=r as u32).collect();
    loop {
        if keep.sample(rng) {
            out.extend_from_slice(&c);
        }
        // advance to the lexicographic successor
        let mut i = r;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if c[i] < n - (r - 1 - i) as u32 {
                break;
            }
        }
        c[i] += 1;
        for j in i + 1..r {
            c[j] = c[j - 1] + 1;
        }
    }
}

/// One uniformly random `r`-subset of `1..=n`, ascending.
fn random_tuple<R: Rng + ?Sized>(rng: &mut R, n: u32, r: usize, buf: &mut Vec<u32>) {
    buf.clear();
    buf.extend(
        rand::seq::index::sample(rng, n as usize, r)
            .into_iter()
            .map(|i| i as u32 + 1),
    );
    buf.sort_unstable();
}

/// `m` distinct uniform tuples in lexicographic order, flattened.
///
/// Draws in batches and tops up the deficit; the result is the set of the
/// first `m` distinct draws of an i.i.d. sequence, hence uniform.
fn distinct_tuples<R: Rng + ?Sized>(rng: &mut R, n: u32, r: usize, m: usize) -> Vec<u32> {
    let bits = 32 - n.leading_zeros() as usize;
    if bits * r <= 128 {
        let encode = |t: &[u32]| t.iter().fold(0u128, |acc, &v| (acc << bits) | v as u128);
        let mut keys: Vec<u128> = Vec::with_capacity(m);
        let mut buf = Vec::with_capacity(r);
        while keys.len() < m {
            let need = m - keys.len();
            for _ in 0..need {
                random_tuple(rng, n, r, &mut buf);
                keys.push(encode(&buf));
            }
            keys.sort_unstable();
            keys.dedup();
        }
        let mask = (1u128 << bits) - 1;
        let mut out = Vec::with_capacity(m * r);
        for k in keys {
            for i in (0..r).rev() {
                out.push(((k >> (bits * i)) & mask) as u32);
            }
        }
        out
    } else {
        let mut rows: Vec<Vec<u32>> = Vec::with_capacity(m);
        let mut buf = Vec::with_capacity(r);
        while rows.len() < m {
            let need = m - rows.len();
            for _ in 0..need {
                random_tuple(rng, n, r, &mut buf);
                rows.push(buf.clone());
            }
            rows.sort_unstable();
            rows.dedup();
        }
        rows.concat()
    }
}

/// Independent Bernoulli(`p`) flags for the `n - r + 1` consecutive blocks.
pub fn sample_unit_mask(n: u32, r: usize, p: f64, seed: RngSeed) -> Result<UnitEdgeMask> {
    check_params(n, r, p)?;
    let keep = Bernoulli::new(p).expect("p in [0, 1]");
    let mut rng = seed.rng();
    let present = (0..n as usize - r + 1).map(|_| keep.sample(&mut rng)).collect();
    UnitEdgeMask::new(n, r, present)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuple_counts() {
        assert_eq!(tuple_count(20, 3).exact, Some(1140));
        assert_eq!(tuple_count(60, 3).exact, Some(34220));
        assert_eq!(tuple_count(5, 7).exact, Some(0));
        assert!((tuple_count(20, 3).ln - 1140f64.ln()).abs() < 1e-12);
        // C(10^6, 10) ~ 2.7e53 does not fit in 128 bits
        let big = tuple_count(1_000_000, 10);
        assert!(big.exact.is_none());
        assert!((big.ln - 123.05).abs() < 0.01, "{}", big.ln);
    }

    #[test]
    fn extreme_probabilities() {
        let g = sample_explicit(3, 3, 1.0, RngSeed::new(1, 0)).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![&[1, 2, 3][..]]);
        let g = sample_explicit(10, 2, 0.0, RngSeed::new(1, 0)).unwrap();
        assert_eq!(g.edge_count(), 0);
        for strategy in [Strategy::Enumerate, Strategy::Sparse] {
            let opts = SampleOptions { strategy, ..Default::default() };
            let g = sample_explicit_with(6, 3, 1.0, RngSeed::new(2, 0), &opts).unwrap();
            assert_eq!(g.edge_count(), 20);
            assert!(g.validate().is_ok());
        }
    }

    #[test]
    fn deterministic_per_seed() {
        for strategy in [Strategy::Enumerate, Strategy::Sparse] {
            let opts = SampleOptions { strategy, ..Default::default() };
            let a = sample_explicit_with(20, 3, 0.5, RngSeed::new(9, 1), &opts).unwrap();
            let b = sample_explicit_with(20, 3, 0.5, RngSeed::new(9, 1), &opts).unwrap();
            assert_eq!(a, b);
            assert!(a.edge_count() <= 1140);
            assert!(a.validate().is_ok());
        }
    }

    #[test]
    fn budget_error() {
        let opts = SampleOptions { max_expected_edges: 100.0, ..Default::default() };
        let err = sample_explicit_with(100, 3, 0.5, RngSeed::default(), &opts).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
        assert_eq!(err.kind(), "budget-exceeded");
    }

    #[test]
    fn bad_parameters() {
        assert!(sample_explicit(2, 3, 0.5, RngSeed::default()).is_err());
        assert!(sample_explicit(5, 1, 0.5, RngSeed::default()).is_err());
        assert!(sample_explicit(5, 2, 1.5, RngSeed::default()).is_err());
        assert!(sample_unit_mask(2, 3, 0.5, RngSeed::default()).is_err());
    }

    #[test]
    fn unit_mask_extremes() {
        assert_eq!(sample_unit_mask(5, 3, 1.0, RngSeed::default()).unwrap().present(), &[true; 3]);
        assert_eq!(sample_unit_mask(5, 3, 0.0, RngSeed::default()).unwrap().present(), &[false; 3]);
    }

    #[test]
    fn unit_mask_frequency() {
        // binomial 3-sigma: sqrt(0.3 * 0.7 / 1e6) = 4.6e-4, so 0.002 is ample
        let m = sample_unit_mask(1_000_000, 3, 0.3, RngSeed::new(11, 0)).unwrap();
        let freq = m.present_count() as f64 / m.len() as f64;
        assert!((freq - 0.3).abs() < 0.002, "{freq}");
    }

    #[test]
    fn huge_tuple_space_is_sparse() {
        // C(10^4, 3) ~ 1.7e11 tuples, ~35 expected edges
        let n = 10_000u32;
        let p = (n as f64).powf(-2.42);
        let g = sample_explicit(n, 3, p, RngSeed::new(3, 0)).unwrap();
        assert!(g.validate().is_ok());
        assert!(g.edge_count() < 200);
    }

    #[test]
    fn wide_tuples_use_row_fallback() {
        // 10 labels of 17 bits exceed 128 bits
        let opts = SampleOptions { strategy: Strategy::Sparse, ..Default::default() };
        let g = sample_explicit_with(100_000, 10, 1e-40, RngSeed::new(5, 0), &opts).unwrap();
        assert!(g.validate().is_ok());
        let opts = SampleOptions { strategy: Strategy::Sparse, ..Default::default() };
        let g = sample_explicit_with(12, 10, 0.5, RngSeed::new(5, 0), &opts).unwrap();
        assert!(g.validate().is_ok());
        assert!(g.edge_count() <= 66);
    }

    #[test]
    fn binomial_approximations() {
        let mut rng = RngSeed::new(1, 0).rng();
        let huge = TupleCount { exact: None, ln: 100.0 };
        // mean e^{100} * e^{-90} = e^{10} ≈ 22026: Poisson branch
        let draws: Vec<u64> = (0..200).map(|_| binomial_draw(&mut rng, huge, (-90f64).exp())).collect();
        let mean = draws.iter().sum::<u64>() as f64 / 200.0;
        assert!((mean - 22026.5).abs() < 5.0 * (22026.5f64 / 200.0).sqrt() + 1.0, "{mean}");
        // mean e^{20} ≈ 4.85e8: normal branch
        let x = binomial_draw(&mut rng, huge, (-80f64).exp());
        assert!((x as f64 / 20f64.exp() - 1.0).abs() < 1e-3);
        assert_eq!(binomial_draw(&mut rng, huge, 0.0), 0);
    }
}
