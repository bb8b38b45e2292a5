use loosepath::theory::{
    classify_regime, dense_band, edge_at_offset, expected_extension, expected_extension_bounds, first_moment_length,
    log_regime_f, no_edge_before, poisson_lambda, second_moment_length, solve_log_regime_length, sparse_window,
};
use proptest::prelude::*;

const TOL: f64 = 1e-13;

fn p_grid() -> impl Iterator<Item = f64> {
    (1..=19).map(|k| k as f64 * 0.05)
}

#[test]
fn series_lies_in_sandwich() {
    for r in 2..=8 {
        for p in p_grid() {
            let e = expected_extension(r, p, TOL);
            let b = expected_extension_bounds(r, p);
            assert!(e.value >= b.lower - 1e-12 && e.value <= b.upper + 1e-12, "r={r} p={p}: {} not in {b:?}", e.value);
            assert!(e.tail_bound <= TOL);
        }
    }
}

#[test]
fn r2_closed_form() {
    for p in [0.9, 0.5, 0.1, 0.01, 1e-4] {
        let v = expected_extension(2, p, 1e-12).value;
        assert!((v - 1.0 / p).abs() <= 1e-9 / p, "p={p}: {v}");
    }
}

#[test]
fn direct_sum_oracle() {
    // Pr(X > r-1+i) = q_{i+1}, so E X = r - 1 + Σ_{i≥1} q_i
    for r in 2..=6 {
        for p in [0.2, 0.5, 0.9] {
            let mut tail = 0.0;
            for i in 1..10_000 {
                tail += no_edge_before(r, p, i);
            }
            let v = expected_extension(r, p, TOL).value;
            assert!((v - ((r - 1) as f64 + tail)).abs() < 1e-10, "r={r} p={p}");
        }
    }
}

#[test]
fn small_p_slope() {
    for (r, want) in [(3usize, -0.5), (4, -1.0 / 3.0)] {
        let ps: Vec<f64> = (2..=6).map(|k| 10f64.powi(-k)).collect();
        let xs: Vec<f64> = ps.iter().map(|p| p.ln()).collect();
        let ys: Vec<f64> = ps.iter().map(|&p| expected_extension(r, p, 1e-9).value.ln()).collect();
        let mx = xs.iter().sum::<f64>() / xs.len() as f64;
        let my = ys.iter().sum::<f64>() / ys.len() as f64;
        let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
            / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
        assert!((slope - want).abs() < 0.05, "r={r}: slope {slope}");
    }
}

#[test]
fn large_r_approaches_r_minus_half() {
    let gaps: Vec<f64> = (4..=12)
        .map(|r| (expected_extension(r, 0.5, TOL).value - (r as f64 - 0.5)).abs())
        .collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
    assert!(*gaps.last().unwrap() < 1e-2);
}

#[test]
fn dense_upper_beats_trivial() {
    for r in 2..=8 {
        for p in p_grid() {
            let b = dense_band(1e5, r, p);
            assert!(b.upper < 1e5 / (r - 1) as f64);
            assert!(b.lower <= b.upper);
        }
    }
    let b = dense_band(1e4, 2, 1.0 - 1e-9);
    assert!((b.lower / 1e4 - 1.0).abs() < 1e-6 && (b.upper / 1e4 - 1.0).abs() < 1e-6);
}

#[test]
fn moment_lengths() {
    let n = 1e5f64;
    let p = n.powf(-0.7);
    assert!((first_moment_length(n, 2, p) - 4.0 * std::f64::consts::E * n.powf(0.3)).abs() < 1e-9);
    assert!((first_moment_length(n, 2, p) - 343.8).abs() < 0.1);
    assert!((second_moment_length(n, 2, p) - 2.95).abs() < 0.01);
    assert_eq!(second_moment_length(100.0, 3, 1e-4), 0.0);
    for r in 2..=6 {
        for k in 1..=40 {
            let p = 10f64.powf(-(k as f64) / 5.0);
            let f = first_moment_length(n, r, p);
            assert!(second_moment_length(n, r, p) <= f);
            let ratio = first_moment_length(n, r, (2.0 * p).min(0.999)) / f;
            if 2.0 * p < 0.999 {
                assert!((ratio - 2f64.powf(1.0 / (r - 1) as f64)).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn term_probabilities_match_binomials() {
    // C(r-2+i, r-1) and C(r-2+i, r-2) from Pascal's triangle
    let mut pascal = vec![vec![1u64]];
    for m in 1..40usize {
        let prev = &pascal[m - 1];
        let row: Vec<u64> = (0..=m)
            .map(|k| if k == 0 || k == m { 1 } else { prev[k - 1] + prev[k] })
            .collect();
        pascal.push(row);
    }
    let c = |m: usize, k: usize| if k > m { 0 } else { pascal[m][k] };
    for r in 2..=6 {
        for i in 0..30u64 {
            let m = r - 2 + i as usize;
            let q = 0.7f64.powi(c(m, r - 1) as i32);
            let pi = 1.0 - 0.7f64.powi(c(m, r - 2) as i32);
            assert!((no_edge_before(r, 0.3, i) - q).abs() < 1e-12 * q.max(1e-300));
            assert!((edge_at_offset(r, 0.3, i) - pi).abs() < 1e-12);
        }
    }
}

#[test]
fn poisson_rates_and_windows() {
    assert!((poisson_lambda(120f64.sqrt(), 3, 2) - 1.0).abs() < 1e-12);
    assert!((poisson_lambda(1.0, 3, 1) - 1.0 / 6.0).abs() < 1e-15);
    let (lo, hi) = sparse_window(2000.0, 3, 2);
    assert!((lo - 2000f64.powf(-2.5)).abs() < 1e-20);
    assert!((hi - 2000f64.powf(-7.0 / 3.0)).abs() < 1e-20);
    let (lo, hi) = sparse_window(2000.0, 3, 10_000);
    assert!((lo.ln() - 2000f64.powf(-2.0).ln()).abs() < 1e-3 && lo < hi);
}

proptest! {
    #[test]
    fn lambda_is_homogeneous(c in 0.1f64..10.0, t in 0.1f64..5.0, r in 2usize..6, ell in 1u64..6) {
        let ratio = poisson_lambda(c * t, r, ell) / poisson_lambda(c, r, ell);
        prop_assert!((ratio / t.powi(ell as i32) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn windows_are_ordered(n in 10f64..1e7, r in 2usize..6, ell in 2u64..50) {
        let (lo, hi) = sparse_window(n, r, ell);
        prop_assert!(lo < hi);
    }

    #[test]
    fn planted_roots_are_recovered(l0 in 2f64..60.0, r in 3usize..5, ln_n in 7f64..14.0) {
        let n = ln_n.exp();
        let p = (l0 / n).powf((r - 1) as f64 + 1.0 / l0);
        let root = solve_log_regime_length(n, r, p).unwrap();
        prop_assert!((root.root / l0 - 1.0).abs() < 1e-6);
        prop_assert!((log_regime_f(n, r, p, root.root) - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn regimes_have_ordered_bands(ln_n in 3f64..16.0, r in 2usize..7, e in 0.01f64..8.0) {
        let n = ln_n.exp().max(r as f64);
        let p = (-e * ln_n).exp().min(0.99);
        let pred = classify_regime(n, r, p);
        prop_assert!(pred.band.lower <= pred.band.upper);
    }
}
