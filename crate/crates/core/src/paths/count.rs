use serde::{Deserialize, Serialize};

use crate::hypergraph::OrderedHypergraph;
use crate::{Error, Result};

/// Number of ordered loose paths with exactly `ell` edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathCount {
    pub ell: usize,
    pub count: u128,
}

/// `N[v][k] = Σ_{last(e) = v} N[first(e)][k-1]` with `N[v][0] = 1`, summed
/// over `v` at `k = ell`. Fails with [`Error::CountOverflow`] rather than wrap.
pub fn count_paths(h: &OrderedHypergraph, ell: usize) -> Result<PathCount> {
    if ell == 0 {
        return Err(Error::invalid("path length must be at least 1"));
    }
    let n = h.n() as usize;
    let overflow = || Error::CountOverflow { ell };
    let mut prev = vec![1u128; n + 1];
    prev[0] = 0;
    let mut cur = vec![0u128; n + 1];
    for _ in 0..ell {
        for v in 1..=n {
            let mut acc = 0u128;
            for &id in h.by_last(v as u32) {
                acc = acc
                    .checked_add(prev[h.first(id) as usize])
                    .ok_or_else(overflow)?;
            }
            cur[v] = acc;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    let count = prev
        .iter()
        .try_fold(0u128, |a, &x| a.checked_add(x))
        .ok_or_else(overflow)?;
    Ok(PathCount { ell, count })
}
