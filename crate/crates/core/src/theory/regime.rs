//! Which range of `p` a finite `(n, r, p)` belongs to, and the band of
//! `ℓ_max` predicted there.
//!
//! Asymptotic relations cannot be decided at finite `n`; the boundaries below
//! use the literal expressions with constant 1 (see [`RegimeCutoffs`]).
//! Checked from dense to sparse:
//!
//! | id | range |
//! |---|---|
//! | `T1.1-dense` | `p ≥ dense_min_p` |
//! | `T1.2-upper` | `sqrt(ln n)/n^{(r-1)/4} < p < dense_min_p` |
//! | `T1.3-middle` | `n^{-(r-1)/2} ≤ p ≤ sqrt(ln n)/n^{(r-1)/4}` |
//! | `T1.2-lower` | `(ln n)^{r-1}/n^{r-1} ≤ p < n^{-(r-1)/2}` |
//! | `T1.5-sparse(ℓ)` | `r ≥ 3`, `n^{-(r-1+1/ℓ)} < p ≤ n^{-(r-1+1/(ℓ+1))}`, `2 ≤ ℓ ≤ max_sparse_len` |
//! | `T1.4-log` | `r ≥ 3`, remaining `p` down to the `ℓ = max_sparse_len + 1` window |
//! | `below-range` | everything else |

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{
    dense_band, first_moment_length, greedy_accounting_band, second_moment_length,
    short_extension_span, solve_log_regime_length, Band,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Regime {
    Dense,
    UpperMiddle,
    Middle,
    LowerMiddle,
    Logarithmic,
    Sparse { ell: u64 },
    BelowRange,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regime::Dense => f.write_str("T1.1-dense"),
            Regime::UpperMiddle => f.write_str("T1.2-upper"),
            Regime::Middle => f.write_str("T1.3-middle"),
            Regime::LowerMiddle => f.write_str("T1.2-lower"),
            Regime::Logarithmic => f.write_str("T1.4-log"),
            Regime::Sparse { ell } => write!(f, "T1.5-sparse({ell})"),
            Regime::BelowRange => f.write_str("below-range"),
        }
    }
}

impl From<Regime> for String {
    fn from(r: Regime) -> Self {
        r.to_string()
    }
}

impl TryFrom<String> for Regime {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        Ok(match s.as_str() {
            "T1.1-dense" => Regime::Dense,
            "T1.2-upper" => Regime::UpperMiddle,
            "T1.3-middle" => Regime::Middle,
            "T1.2-lower" => Regime::LowerMiddle,
            "T1.4-log" => Regime::Logarithmic,
            "below-range" => Regime::BelowRange,
            other => {
                let ell = other
                    .strip_prefix("T1.5-sparse(")
                    .and_then(|t| t.strip_suffix(')'))
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| format!("unknown regime {other:?}"))?;
                Regime::Sparse { ell }
            }
        })
    }
}

/// Finite-`n` stand-ins for the asymptotic range boundaries.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimeCutoffs {
    /// Smallest `p` treated as constant.
    pub dense_min_p: f64,
    /// Largest `ℓ` reported as a sparse point mass; windows for longer paths
    /// fall to the logarithmic regime.
    pub max_sparse_len: u64,
}

impl Default for RegimeCutoffs {
    fn default() -> Self {
        Self {
            dense_min_p: 0.01,
            max_sparse_len: 5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimePrediction {
    pub regime: Regime,
    /// Predicted range of `ℓ_max`, in edges.
    pub band: Band,
    pub notes: Vec<String>,
}

pub fn classify_regime(n: f64, r: usize, p: f64) -> RegimePrediction {
    classify_regime_with(n, r, p, &RegimeCutoffs::default())
}

pub fn classify_regime_with(n: f64, r: usize, p: f64, cut: &RegimeCutoffs) -> RegimePrediction {
    assert!(r >= 2 && n >= r as f64, "need n >= r >= 2");
    assert!(p > 0.0 && p < 1.0, "p must lie in (0, 1)");
    let k = (r - 1) as f64;
    let ln_n = n.ln();
    let upper_middle_min = ln_n.sqrt() / n.powf(k / 4.0);
    let middle_min = n.powf(-k / 2.0);
    let lower_middle_min = ln_n.powf(k) / n.powf(k);
    let trivial = ((n - 1.0) / k).floor();

    let mut notes = vec![format!(
        "cutoffs: dense p >= {}, sqrt(ln n)/n^((r-1)/4) = {upper_middle_min:e}, \
         n^(-(r-1)/2) = {middle_min:e}, (ln n)^(r-1)/n^(r-1) = {lower_middle_min:e}",
        cut.dense_min_p
    )];

    let moment_band = |lower: f64, lower_id: &str| {
        let upper = first_moment_length(n, r, p).min(trivial);
        Band::new(
            lower.min(upper),
            upper,
            &[lower_id, "upper = min(4^(1/(r-1)) e/(r-1) n p^(1/(r-1)), (n-1)/(r-1))"],
        )
    };

    if p >= cut.dense_min_p {
        return RegimePrediction {
            regime: Regime::Dense,
            band: dense_band(n, r, p),
            notes,
        };
    }
    if p > upper_middle_min {
        let lower = greedy_accounting_band(n, r, p).lower;
        return RegimePrediction {
            regime: Regime::UpperMiddle,
            band: moment_band(lower, "lower = (n-1)/E X - 1 (greedy)"),
            notes,
        };
    }
    if p >= middle_min {
        let d = short_extension_span(n, r, p);
        let lower = ((n - d) / d).max(0.0);
        notes.push(format!("short-extension span d = {d}"));
        return RegimePrediction {
            regime: Regime::Middle,
            band: moment_band(lower, "lower = (n - d)/d, d = (r-1)(2 ln n/p)^(1/(r-1))"),
            notes,
        };
    }
    if p >= lower_middle_min {
        return RegimePrediction {
            regime: Regime::LowerMiddle,
            band: moment_band(
                second_moment_length(n, r, p),
                "lower = n p^(1/(r-1))/(8(r-1)) - 1/(r-1)",
            ),
            notes,
        };
    }
    if r < 3 {
        notes.push("no prediction below (ln n)^(r-1)/n^(r-1) for r = 2".into());
        return below_range(notes);
    }
    // p = n^{-(r-1+θ)}
    let theta = -p.ln() / ln_n - k;
    if theta > 0.0 {
        let ell = (1.0 / theta).floor();
        if ell < 2.0 {
            notes.push(format!("exponent offset {theta:.4} is outside every sparse window"));
            return below_range(notes);
        }
        let ell = ell as u64;
        if ell <= cut.max_sparse_len {
            notes.push(format!("exponent offset {theta:.4} lies in the window for length {ell}"));
            return RegimePrediction {
                regime: Regime::Sparse { ell },
                band: Band::new(ell as f64, ell as f64, &["l_max = l inside the sparse window"]),
                notes,
            };
        }
    }
    match solve_log_regime_length(n, r, p) {
        Ok(root) => {
            let l0 = root.root;
            notes.push(format!("l0 = {l0}"));
            let lower = ((l0 / 4.0 - 1.0) / k).max(0.0);
            let upper = ((2.0 * std::f64::consts::E * k * l0 - 1.0) / k).min(trivial);
            RegimePrediction {
                regime: Regime::Logarithmic,
                band: Band::new(
                    lower.min(upper),
                    upper,
                    &["lower = (l0/4 - 1)/(r-1)", "upper = (2e(r-1) l0 - 1)/(r-1)"],
                ),
                notes,
            }
        }
        Err(e) => {
            notes.push(e.to_string());
            below_range(notes)
        }
    }
}

fn below_range(notes: Vec<String>) -> RegimePrediction {
    RegimePrediction {
        regime: Regime::BelowRange,
        band: Band::new(0.0, f64::INFINITY, &["no prediction"]),
        notes,
    }
}
