use serde::{Deserialize, Serialize};

use crate::hypergraph::UnitEdgeMask;
use crate::{Error, Result};

/// Largest `n` accepted by [`unit_union_bruteforce`].
pub const UNIT_BRUTE_FORCE_MAX_N: u32 = 14;

/// A selection of consecutive blocks, pairwise sharing at most one vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitUnion {
    pub y: usize,
    /// 1-based start positions of the chosen blocks.
    pub positions: Vec<u32>,
}

/// Left-to-right scan taking every present block that starts at or after the
/// last vertex of the previously taken one.
pub fn unit_union_greedy(mask: &UnitEdgeMask) -> UnitUnion {
    let gap = mask.r() as u32 - 1;
    let mut positions = Vec::new();
    let mut next = 1u32;
    for (idx, &present) in mask.present().iter().enumerate() {
        let j = idx as u32 + 1;
        if present && j >= next {
            positions.push(j);
            next = j + gap;
        }
    }
    UnitUnion {
        y: positions.len(),
        positions,
    }
}

/// Largest subset of present blocks with pairwise intersections of size at
/// most one, by exhaustive search.
pub fn unit_union_bruteforce(mask: &UnitEdgeMask) -> Result<usize> {
    if mask.n() > UNIT_BRUTE_FORCE_MAX_N {
        return Err(Error::SizeLimit {
            size: mask.n() as usize,
            limit: UNIT_BRUTE_FORCE_MAX_N as usize,
        });
    }
    let r = mask.r() as i64;
    let blocks: Vec<i64> = (1..=mask.len() as u32)
        .filter(|&j| mask.is_present(j))
        .map(i64::from)
        .collect();
    // blocks at i < j overlap in max(0, r - (j - i)) vertices
    let compatible = |a: i64, b: i64| r - (a - b).abs() <= 1;
    let mut best = 0;
    for subset in 0u32..(1 << blocks.len()) {
        let chosen: Vec<i64> = (0..blocks.len())
            .filter(|&k| subset >> k & 1 == 1)
            .map(|k| blocks[k])
            .collect();
        if chosen.len() <= best {
            continue;
        }
        let ok = chosen
            .iter()
            .enumerate()
            .all(|(a, &x)| chosen[a + 1..].iter().all(|&y| compatible(x, y)));
        if ok {
            best = chosen.len();
        }
    }
    Ok(best)
}
