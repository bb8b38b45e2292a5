use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::pexpr::eval_p_expr;
use crate::hypergraph::SampleOptions;
use crate::rng::DEFAULT_SEED;
use crate::theory::short_extension_span;
use crate::{Error, Result};

/// Edge probability, either literal or as a function of `n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProbabilitySpec {
    Value(f64),
    Expr {
        expr: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        c: Option<f64>,
    },
}

impl ProbabilitySpec {
    pub fn resolve(&self, n: u32) -> Result<f64> {
        let p = match self {
            ProbabilitySpec::Value(p) => *p,
            ProbabilitySpec::Expr { expr, c } => eval_p_expr(expr, n as f64, *c)?,
        };
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::invalid(format!("p = {p} is not a probability")));
        }
        Ok(p)
    }

    /// The constant `c` of an expression, if any.
    pub fn c(&self) -> Option<f64> {
        match self {
            ProbabilitySpec::Expr { c, .. } => *c,
            ProbabilitySpec::Value(_) => None,
        }
    }
}

impl From<f64> for ProbabilitySpec {
    fn from(p: f64) -> Self {
        ProbabilitySpec::Value(p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    /// Materialise the hypergraph.
    Explicit,
    /// Simulate greedy without building the hypergraph.
    Lazy,
    /// Sample only the consecutive blocks.
    Unit,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Explicit => "explicit",
            Backend::Lazy => "lazy",
            Backend::Unit => "unit",
        })
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "explicit" => Ok(Backend::Explicit),
            "lazy" => Ok(Backend::Lazy),
            "unit" => Ok(Backend::Unit),
            other => Err(Error::invalid(format!("unknown backend '{other}' (explicit, lazy, unit)"))),
        }
    }
}

/// What each trial reports.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Measure {
    /// `ℓ_max` by dynamic programming.
    LmaxExact,
    /// Number of greedy steps `K`.
    GreedyK,
    /// Number of paths with this many edges.
    CountPaths(usize),
    /// Size of the greedy union of consecutive blocks.
    UnitY,
    /// 1 if every `v ≤ n - d` has an outgoing edge of span at most `d`, else 0.
    /// `None` uses `d = (r-1)(2 ln n/p)^(1/(r-1))`.
    MinExtension(Option<f64>),
}

impl Measure {
    pub fn required_backends(&self) -> &'static [Backend] {
        match self {
            Measure::GreedyK => &[Backend::Explicit, Backend::Lazy],
            Measure::UnitY => &[Backend::Unit],
            _ => &[Backend::Explicit],
        }
    }

    /// The span used by [`Measure::MinExtension`].
    pub fn span(&self, n: u32, r: usize, p: f64) -> Option<f64> {
        match self {
            Measure::MinExtension(d) => Some(d.unwrap_or_else(|| short_extension_span(n as f64, r, p))),
            _ => None,
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Measure::LmaxExact => f.write_str("lmax_exact"),
            Measure::GreedyK => f.write_str("greedy_K"),
            Measure::CountPaths(ell) => write!(f, "count_paths({ell})"),
            Measure::UnitY => f.write_str("unit_Y"),
            Measure::MinExtension(None) => f.write_str("min_extension"),
            Measure::MinExtension(Some(d)) => write!(f, "min_extension({d})"),
        }
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::invalid(format!("unknown measure '{s}'"));
        let arg = |prefix: &str| {
            s.strip_prefix(prefix)
                .and_then(|t| t.strip_prefix('('))
                .and_then(|t| t.strip_suffix(')'))
                .map(str::trim)
        };
        Ok(match s.trim() {
            "lmax_exact" => Measure::LmaxExact,
            "greedy_K" => Measure::GreedyK,
            "unit_Y" => Measure::UnitY,
            "min_extension" => Measure::MinExtension(None),
            _ => {
                if let Some(a) = arg("count_paths") {
                    let ell: usize = a.parse().map_err(|_| bad())?;
                    if ell == 0 {
                        return Err(Error::invalid("count_paths needs a length of at least 1"));
                    }
                    Measure::CountPaths(ell)
                } else if let Some(a) = arg("min_extension") {
                    let d: f64 = a.parse().map_err(|_| bad())?;
                    if !(d > 0.0) {
                        return Err(Error::invalid("min_extension span must be positive"));
                    }
                    Measure::MinExtension(Some(d))
                } else {
                    return Err(bad());
                }
            }
        })
    }
}

impl From<Measure> for String {
    fn from(m: Measure) -> Self {
        m.to_string()
    }
}

impl TryFrom<String> for Measure {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

/// One batch of independent trials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n: u32,
    pub r: usize,
    pub p: ProbabilitySpec,
    pub trials: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    pub backend: Backend,
    pub measure: Measure,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// Worker pool width; `None` uses every core, `Some(1)` runs serially.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    /// Record per-trial wall time. Off by default so outputs are byte-stable.
    #[serde(default)]
    pub timing: bool,
    /// Cap on the expected edge count of an explicit sample.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<f64>,
}

impl ExperimentConfig {
    pub fn new(n: u32, r: usize, p: impl Into<ProbabilitySpec>, trials: usize, backend: Backend, measure: Measure) -> Self {
        Self {
            n,
            r,
            p: p.into(),
            trials,
            seed: DEFAULT_SEED,
            backend,
            measure,
            output: None,
            threads: None,
            timing: false,
            budget: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = Some(threads);
        self
    }

    /// Checks the invariants and returns the resolved `p`.
    pub fn validate(&self) -> Result<f64> {
        if self.trials == 0 {
            return Err(Error::invalid("trials must be at least 1"));
        }
        if self.r < 2 || (self.n as usize) < self.r {
            return Err(Error::invalid(format!("need n >= r >= 2, got n={}, r={}", self.n, self.r)));
        }
        if self.threads == Some(0) {
            return Err(Error::invalid("threads must be at least 1"));
        }
        if let Some(b) = self.budget {
            if !(b > 0.0) {
                return Err(Error::invalid("budget must be positive"));
            }
        }
        if !self.measure.required_backends().contains(&self.backend) {
            return Err(Error::invalid(format!(
                "measure {} is not available on the {} backend",
                self.measure, self.backend
            )));
        }
        self.p.resolve(self.n)
    }

    pub fn sample_options(&self) -> SampleOptions {
        let mut opts = SampleOptions::default();
        if let Some(b) = self.budget {
            opts.max_expected_edges = b;
        }
        opts
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn measure_strings() {
        for s in ["lmax_exact", "greedy_K", "count_paths(2)", "unit_Y", "min_extension", "min_extension(12.5)"] {
            assert_eq!(s.parse::<Measure>().unwrap().to_string(), s);
        }
        for s in ["count_paths(0)", "count_paths()", "lmax", "min_extension(-1)"] {
            assert!(s.parse::<Measure>().is_err(), "{s}");
        }
    }

    #[test]
    fn json_config() {
        let cfg: ExperimentConfig = serde_json::from_str(
            r#"{"n": 2000, "r": 3, "p": {"expr": "c*n^-2.5", "c": 10.954451150103322},
                "trials": 10, "backend": "explicit", "measure": "count_paths(2)"}"#,
        )
        .unwrap();
        assert_eq!(cfg.seed, DEFAULT_SEED);
        assert_eq!(cfg.measure, Measure::CountPaths(2));
        let p = cfg.validate().unwrap();
        assert!((p - 120f64.sqrt() * 2000f64.powf(-2.5)).abs() < 1e-20);
        let back: ExperimentConfig = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
        let lit: ExperimentConfig = serde_json::from_str(
            r#"{"n": 10, "r": 2, "p": 0.5, "trials": 1, "backend": "lazy", "measure": "greedy_K"}"#,
        )
        .unwrap();
        assert_eq!(lit.p, ProbabilitySpec::Value(0.5));
        assert!(serde_json::from_str::<ExperimentConfig>(
            r#"{"n": 10, "r": 2, "p": 0.5, "trials": 1, "backend": "lazy", "measure": "greedy_K", "extra": 1}"#
        )
        .is_err());
    }

    #[test]
    fn compatibility() {
        let ok = ExperimentConfig::new(10, 2, 0.5, 1, Backend::Explicit, Measure::LmaxExact);
        assert!(ok.validate().is_ok());
        for (b, m) in [
            (Backend::Lazy, Measure::LmaxExact),
            (Backend::Unit, Measure::GreedyK),
            (Backend::Explicit, Measure::UnitY),
            (Backend::Lazy, Measure::CountPaths(2)),
        ] {
            assert!(ExperimentConfig::new(10, 2, 0.5, 1, b, m).validate().is_err());
        }
        assert!(ExperimentConfig::new(10, 2, 0.5, 0, Backend::Explicit, Measure::LmaxExact).validate().is_err());
        assert!(ExperimentConfig::new(10, 2, 1.5, 1, Backend::Explicit, Measure::LmaxExact).validate().is_err());
    }
}
