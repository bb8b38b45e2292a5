use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::hypergraph::{Edge, EdgeId, OrderedHypergraph};
use crate::{Error, Result};

/// A longest ordered loose path together with its edge-length histogram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathWitness {
    pub lmax: usize,
    #[serde(rename = "edges")]
    pub witness: Vec<Edge>,
    /// Edge length `i` → number `x_i` of witness edges of that length.
    pub histogram: BTreeMap<u32, usize>,
}

impl PathWitness {
    /// Vertex sequence `v_1 < v_2 < …` covered by the witness.
    pub fn vertex_sequence(&self) -> Vec<u32> {
        let mut seq = Vec::new();
        for (i, e) in self.witness.iter().enumerate() {
            let vs = e.vertices();
            seq.extend_from_slice(if i == 0 { vs } else { &vs[1..] });
        }
        seq
    }
}

pub(crate) fn length_histogram<'a>(edges: impl IntoIterator<Item = &'a Edge>) -> BTreeMap<u32, usize> {
    let mut hist = BTreeMap::new();
    for e in edges {
        *hist.entry(e.length()).or_insert(0) += 1;
    }
    hist
}

/// Longest path by dynamic programming over vertices in increasing order.
///
/// `L[v] = max(L[first(e)] + 1)` over edges with `last(e) = v`. Any two chained
/// edges meet only in their connector, since each lies entirely on one side
/// of it, so the DAG longest path is exactly the longest loose path.
pub fn exact_lmax(h: &OrderedHypergraph) -> PathWitness {
    let n = h.n() as usize;
    let mut best = vec![0u32; n + 1];
    let mut parent: Vec<Option<EdgeId>> = vec![None; n + 1];
    let mut end = 0usize;
    for v in 1..=n {
        for &id in h.by_last(v as u32) {
            let cand = best[h.first(id) as usize] + 1;
            // strict: keeps the first maximizer in lexicographic edge order
            if cand > best[v] {
                best[v] = cand;
                parent[v] = Some(id);
            }
        }
        if best[v] > best[end] {
            end = v;
        }
    }
    let mut witness = Vec::with_capacity(best[end] as usize);
    let mut v = end;
    while let Some(id) = parent.get(v).copied().flatten() {
        witness.push(Edge::from_slice_unchecked(h.edge(id)));
        v = h.first(id) as usize;
    }
    witness.reverse();
    PathWitness {
        lmax: witness.len(),
        histogram: length_histogram(&witness),
        witness,
    }
}

/// Default edge cap of [`brute_force_lmax`].
pub const BRUTE_FORCE_EDGE_LIMIT: usize = 24;

/// Exhaustive search over all edge sequences with `max(E_i) = min(E_{i+1})`;
/// no indexes are consulted.
pub fn brute_force_lmax(h: &OrderedHypergraph) -> Result<usize> {
    brute_force_lmax_with_limit(h, BRUTE_FORCE_EDGE_LIMIT)
}

pub fn brute_force_lmax_with_limit(h: &OrderedHypergraph, limit: usize) -> Result<usize> {
    let edges: Vec<&[u32]> = h.edges().collect();
    if edges.len() > limit {
        return Err(Error::SizeLimit {
            size: edges.len(),
            limit,
        });
    }
    fn extend(edges: &[&[u32]], tail: &[u32]) -> usize {
        let end = *tail.iter().max().expect("nonempty edge");
        edges
            .iter()
            .filter(|f| f.iter().min() == Some(&end))
            .map(|f| 1 + extend(edges, f))
            .max()
            .unwrap_or(0)
    }
    Ok(edges.iter().map(|e| 1 + extend(&edges, e)).max().unwrap_or(0))
}
