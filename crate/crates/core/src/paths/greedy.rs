//! Greedy extension from vertex 1: always take the outgoing edge with the
//! smallest last vertex.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::hypergraph::{Edge, OrderedHypergraph};
use crate::rng::RngSeed;
use crate::theory::binomial_f64;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreedyStep {
    pub start: u32,
    pub end: u32,
    /// The chosen edge; `None` when the hypergraph was never materialised.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub edge: Option<Edge>,
}

impl GreedyStep {
    /// Extension length `L_i`.
    pub fn length(&self) -> u32 {
        self.end - self.start
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreedyTrace {
    pub steps: Vec<GreedyStep>,
    pub terminal: u32,
}

impl GreedyTrace {
    /// Number of edges `K` on the greedy path.
    pub fn k(&self) -> usize {
        self.steps.len()
    }

    pub fn lengths(&self) -> Vec<u32> {
        self.steps.iter().map(GreedyStep::length).collect()
    }

    /// Sum of the extension lengths, `terminal - 1`.
    pub fn span(&self) -> u64 {
        self.steps.iter().map(|s| s.length() as u64).sum()
    }

    pub fn histogram(&self) -> BTreeMap<u32, usize> {
        let mut hist = BTreeMap::new();
        for s in &self.steps {
            *hist.entry(s.length()).or_insert(0) += 1;
        }
        hist
    }
}

/// Greedy on a materialised hypergraph. Among the edges leaving the current
/// vertex it takes one with the smallest last vertex, breaking ties by the
/// lexicographically smallest internal vertices.
pub fn greedy_explicit(h: &OrderedHypergraph) -> GreedyTrace {
    let mut steps = Vec::new();
    let mut v = 1u32;
    // by_first is in lexicographic order, so the first minimum wins ties
    while let Some(&id) = h.by_first(v).iter().min_by_key(|&&id| h.last(id)) {
        let end = h.last(id);
        steps.push(GreedyStep {
            start: v,
            end,
            edge: Some(Edge::from_slice_unchecked(h.edge(id))),
        });
        v = end;
    }
    GreedyTrace { steps, terminal: v }
}

/// Outcome of one unconstrained extension draw.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Extension {
    /// Span `r - 1 + i` of the shortest outgoing edge.
    Length(u64),
    /// No outgoing edge at any finite offset (only for `p = 0`, or offsets
    /// beyond 64 bits).
    Never,
}

/// Offset `i ≥ 0` of the shortest outgoing edge, by inversion:
/// `Pr(offset > i) = (1-p)^C(r-1+i, r-1)`, so the offset is the smallest `i`
/// with `C(r-1+i, r-1) ≥ ln U / ln(1-p)`.
fn draw_offset<R: Rng + ?Sized>(rng: &mut R, r: usize, p: f64) -> Option<u64> {
    if p <= 0.0 {
        return None;
    }
    let u: f64 = 1.0 - rng.random::<f64>();
    if p >= 1.0 {
        return Some(0);
    }
    let threshold = u.ln() / (-p).ln_1p();
    if threshold <= 1.0 {
        return Some(0);
    }
    let k = (r - 1) as f64;
    let reach = |i: u64| binomial_f64(k + i as f64, k);
    if r == 2 {
        let i = threshold.ceil() - 1.0;
        return (i < u64::MAX as f64).then_some(i as u64);
    }
    let mut hi: u64 = 1;
    while reach(hi) < threshold {
        hi = hi.checked_mul(2)?;
    }
    // reach(lo) < threshold <= reach(hi)
    let mut lo = hi / 2;
    if reach(lo) >= threshold {
        return Some(lo);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if reach(mid) >= threshold {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

/// A single draw of `X`, the span of the shortest edge leaving a vertex with
/// unboundedly many vertices above it.
pub fn sample_extension(r: usize, p: f64, seed: RngSeed) -> Result<Extension> {
    let mut rng = seed.rng();
    sample_extension_with(&mut rng, r, p)
}

pub fn sample_extension_with<R: Rng + ?Sized>(rng: &mut R, r: usize, p: f64) -> Result<Extension> {
    if r < 2 || !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("need r >= 2 and p in [0, 1], got r={r}, p={p}")));
    }
    Ok(match draw_offset(rng, r, p) {
        Some(i) => (r as u64 - 1)
            .checked_add(i)
            .map_or(Extension::Never, Extension::Length),
        None => Extension::Never,
    })
}

/// Greedy on `H^(r)(n, p)` without building it.
///
/// Tuples with different minimum vertices are disjoint, so each step reveals
/// a fresh, independent block and its shortest-edge span is an independent
/// draw of `X`. The path stops at the first draw that does not fit below `n`.
pub fn greedy_lazy(n: u32, r: usize, p: f64, seed: RngSeed) -> Result<GreedyTrace> {
    if r < 2 || (n as usize) < r || !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!(
            "need n >= r >= 2 and p in [0, 1], got n={n}, r={r}, p={p}"
        )));
    }
    let mut rng = seed.rng();
    let mut steps = Vec::new();
    let mut v = 1u32;
    let base = r as u64 - 1;
    loop {
        let room = (n - v) as u64;
        if room < base {
            break;
        }
        let Some(offset) = draw_offset(&mut rng, r, p) else {
            break;
        };
        if offset > room - base {
            break;
        }
        let end = v + (base + offset) as u32;
        steps.push(GreedyStep {
            start: v,
            end,
            edge: None,
        });
        v = end;
    }
    Ok(GreedyTrace { steps, terminal: v })
}

/// For each vertex, the shortest span among edges starting there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinExtensions {
    n: u32,
    values: Vec<Option<u32>>,
}

impl MinExtensions {
    /// Value at 1-based vertex `v`.
    pub fn get(&self, v: u32) -> Option<u32> {
        v.checked_sub(1)
            .and_then(|i| self.values.get(i as usize).copied().flatten())
    }

    pub fn values(&self) -> &[Option<u32>] {
        &self.values
    }

    /// Whether every `v ≤ n - d` has an outgoing edge of span at most `d`.
    pub fn all_within(&self, d: u32) -> bool {
        let top = self.n.saturating_sub(d);
        (1..=top).all(|v| matches!(self.get(v), Some(x) if x <= d))
    }
}

pub fn min_extension_lengths(h: &OrderedHypergraph) -> MinExtensions {
    let values = (1..=h.n())
        .map(|v| h.by_first(v).iter().map(|&id| h.length(id)).min())
        .collect();
    MinExtensions { n: h.n(), values }
}
