use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::config::{Backend, ExperimentConfig, Measure};
use crate::hypergraph::{sample_explicit_with, sample_unit_mask, SampleOptions};
use crate::paths::{count_paths, exact_lmax, greedy_explicit, greedy_lazy, min_extension_lengths, unit_union_greedy};
use crate::rng::{trial_seed, RngSeed};
use crate::Result;

/// Outcome of one trial. A failed trial keeps its error text and no value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub seed: u64,
    /// Edges of the sample; for the lazy backend, edges on the greedy path.
    pub edges: Option<u64>,
    pub value: Option<u128>,
    pub error: Option<String>,
    pub runtime_ms: Option<f64>,
}

struct Plan {
    n: u32,
    r: usize,
    p: f64,
    backend: Backend,
    measure: Measure,
    opts: SampleOptions,
    master: u64,
    timing: bool,
}

impl Plan {
    fn new(cfg: &ExperimentConfig) -> Result<Self> {
        let p = cfg.validate()?;
        Ok(Self {
            n: cfg.n,
            r: cfg.r,
            p,
            backend: cfg.backend,
            measure: cfg.measure,
            opts: cfg.sample_options(),
            master: cfg.seed,
            timing: cfg.timing,
        })
    }

    fn measure(&self, seed: RngSeed) -> Result<(u64, u128)> {
        let (n, r, p) = (self.n, self.r, self.p);
        match self.backend {
            Backend::Lazy => {
                let k = greedy_lazy(n, r, p, seed)?.k() as u64;
                Ok((k, k as u128))
            }
            Backend::Unit => {
                let mask = sample_unit_mask(n, r, p, seed)?;
                Ok((mask.present_count() as u64, unit_union_greedy(&mask).y as u128))
            }
            Backend::Explicit => {
                let h = sample_explicit_with(n, r, p, seed, &self.opts)?;
                let value = match self.measure {
                    Measure::LmaxExact => exact_lmax(&h).lmax as u128,
                    Measure::GreedyK => greedy_explicit(&h).k() as u128,
                    Measure::CountPaths(ell) => count_paths(&h, ell)?.count,
                    Measure::MinExtension(_) => {
                        let d = self.measure.span(n, r, p).expect("span of min_extension");
                        let d = d.floor().min(u32::MAX as f64) as u32;
                        u128::from(min_extension_lengths(&h).all_within(d))
                    }
                    Measure::UnitY => unreachable!("rejected by validation"),
                };
                Ok((h.edge_count() as u64, value))
            }
        }
    }

    fn run_one(&self, trial: u64) -> TrialRecord {
        let seed = trial_seed(self.master, trial);
        let start = self.timing.then(Instant::now);
        let outcome = self.measure(RngSeed::new(seed, 0));
        let runtime_ms = start.map(|t| t.elapsed().as_secs_f64() * 1e3);
        match outcome {
            Ok((edges, value)) => TrialRecord {
                trial,
                seed,
                edges: Some(edges),
                value: Some(value),
                error: None,
                runtime_ms,
            },
            Err(e) => TrialRecord {
                trial,
                seed,
                edges: None,
                value: None,
                error: Some(format!("{}: {e}", e.kind())),
                runtime_ms,
            },
        }
    }
}

/// Runs every trial on the worker pool; records come back in trial order.
///
/// Without the `parallel` feature, or with `threads = 1`, this is
/// [`run_trials_sequential`].
pub fn run_trials(cfg: &ExperimentConfig) -> Result<Vec<TrialRecord>> {
    #[cfg(feature = "parallel")]
    {
        if cfg.threads != Some(1) {
            use rayon::prelude::*;
            let plan = Plan::new(cfg)?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(cfg.threads.unwrap_or(0))
                .build()
                .map_err(|e| crate::Error::invalid(format!("cannot start worker pool: {e}")))?;
            return Ok(pool.install(|| {
                (0..cfg.trials as u64)
                    .into_par_iter()
                    .map(|t| plan.run_one(t))
                    .collect()
            }));
        }
    }
    run_trials_sequential(cfg)
}

pub fn run_trials_sequential(cfg: &ExperimentConfig) -> Result<Vec<TrialRecord>> {
    let plan = Plan::new(cfg)?;
    Ok((0..cfg.trials as u64).map(|t| plan.run_one(t)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_zero_lmax() {
        let cfg = ExperimentConfig::new(10, 3, 0.0, 1, Backend::Explicit, Measure::LmaxExact);
        let recs = run_trials(&cfg).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].value, Some(0));
        assert_eq!(recs[0].edges, Some(0));
    }

    #[test]
    fn parallel_matches_serial() {
        let cfg = ExperimentConfig::new(40, 3, 0.1, 64, Backend::Explicit, Measure::LmaxExact).with_seed(9);
        let par = run_trials(&cfg.clone().with_threads(4)).unwrap();
        let seq = run_trials_sequential(&cfg).unwrap();
        assert_eq!(par, seq);
        assert!(par.iter().enumerate().all(|(i, r)| r.trial == i as u64));
        assert_eq!(par[5].seed, trial_seed(9, 5));
    }

    #[test]
    fn budget_errors_are_recorded() {
        let mut cfg = ExperimentConfig::new(1000, 3, 0.5, 3, Backend::Explicit, Measure::LmaxExact);
        cfg.budget = Some(1000.0);
        let recs = run_trials(&cfg).unwrap();
        assert_eq!(recs.len(), 3);
        for r in &recs {
            assert!(r.value.is_none());
            assert!(r.error.as_deref().unwrap().starts_with("budget-exceeded"));
        }
    }

    #[test]
    fn timing_is_opt_in() {
        let mut cfg = ExperimentConfig::new(30, 2, 0.2, 2, Backend::Lazy, Measure::GreedyK);
        assert!(run_trials(&cfg).unwrap().iter().all(|r| r.runtime_ms.is_none()));
        cfg.timing = true;
        assert!(run_trials(&cfg).unwrap().iter().all(|r| r.runtime_ms.is_some()));
    }
}
