//! Ordered `r`-uniform hypergraphs on the vertex labels `1..=n`.
//!
//! Edges are stored flat, `r` labels per edge, sorted lexicographically.
//! Two CSR indexes map each vertex `v` to the edges with `first(e) = v` and
//! `last(e) = v`; within a bucket edge ids are ascending, so buckets follow
//! the lexicographic edge order.

mod io;
mod sample;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use io::{load_edge_list, read_edge_list, save_edge_list, write_edge_list};
pub use sample::{
    binomial_draw, sample_explicit, sample_explicit_with, sample_unit_mask, tuple_count,
    SampleOptions, Strategy, TupleCount,
};

/// Index of an edge inside an [`OrderedHypergraph`].
pub type EdgeId = u32;

/// A strictly increasing tuple of vertex labels.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Edge(Vec<u32>);

impl Edge {
    /// Builds an edge, rejecting tuples that are not strictly increasing.
    pub fn new(vertices: Vec<u32>) -> Result<Self, Violation> {
        if vertices.len() < 2 {
            return Err(Violation::Uniformity(vertices.len()));
        }
        if !strictly_increasing(&vertices) {
            return Err(Violation::Ordering { vertices });
        }
        Ok(Edge(vertices))
    }

    pub(crate) fn from_slice_unchecked(vertices: &[u32]) -> Self {
        Edge(vertices.to_vec())
    }

    pub fn vertices(&self) -> &[u32] {
        &self.0
    }

    pub fn r(&self) -> usize {
        self.0.len()
    }

    pub fn first(&self) -> u32 {
        self.0[0]
    }

    pub fn last(&self) -> u32 {
        self.0[self.0.len() - 1]
    }

    /// `last(e) - first(e)`; at least `r - 1`.
    pub fn length(&self) -> u32 {
        edge_length(self)
    }
}

impl TryFrom<Vec<u32>> for Edge {
    type Error = Violation;

    fn try_from(v: Vec<u32>) -> Result<Self, Self::Error> {
        Edge::new(v)
    }
}

impl From<Edge> for Vec<u32> {
    fn from(e: Edge) -> Self {
        e.0
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Span of an edge: `last(e) - first(e)`.
pub fn edge_length(e: &Edge) -> u32 {
    e.last() - e.first()
}

fn strictly_increasing(vs: &[u32]) -> bool {
    vs.windows(2).all(|w| w[0] < w[1])
}

/// First broken invariant found by [`OrderedHypergraph::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    #[error("uniformity {0} is below 2")]
    Uniformity(usize),
    #[error("{vertices:?} has {} vertices, expected {r}", vertices.len())]
    Arity { vertices: Vec<u32>, r: usize },
    #[error("{vertices:?} is not strictly increasing")]
    Ordering { vertices: Vec<u32> },
    #[error("{vertices:?} leaves the vertex range 1..={n}")]
    Range { vertices: Vec<u32>, n: u32 },
    #[error("{vertices:?} appears more than once")]
    Duplicate { vertices: Vec<u32> },
    #[error("endpoint index disagrees with the edge set at edge {edge}")]
    Index { edge: EdgeId },
    #[error("{n} vertices cannot carry an edge of size {r}")]
    TooFewVertices { n: u32, r: usize },
}

/// Vertex-indexed CSR buckets of edge ids.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Buckets {
    offsets: Vec<usize>,
    ids: Vec<EdgeId>,
}

impl Buckets {
    fn build(n: u32, m: usize, key: impl Fn(usize) -> Option<u32>) -> Self {
        let slots = n as usize + 2;
        let mut offsets = vec![0usize; slots];
        for e in 0..m {
            if let Some(v) = key(e) {
                offsets[v as usize + 1] += 1;
            }
        }
        for i in 1..slots {
            offsets[i] += offsets[i - 1];
        }
        let mut fill = offsets.clone();
        let mut ids = vec![0; offsets[slots - 1]];
        for e in 0..m {
            if let Some(v) = key(e) {
                ids[fill[v as usize]] = e as EdgeId;
                fill[v as usize] += 1;
            }
        }
        Buckets { offsets, ids }
    }

    fn get(&self, v: u32) -> &[EdgeId] {
        let v = v as usize;
        if v + 1 >= self.offsets.len() {
            return &[];
        }
        &self.ids[self.offsets[v]..self.offsets[v + 1]]
    }
}

/// An `r`-uniform hypergraph on `1..=n` with endpoint indexes.
///
/// Immutable once built; cheap to share across threads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedHypergraph {
    n: u32,
    r: usize,
    verts: Vec<u32>,
    by_first: Buckets,
    by_last: Buckets,
}

impl OrderedHypergraph {
    /// Builds a hypergraph from explicit edges, rejecting any violation.
    pub fn from_edges<I>(n: u32, r: usize, edges: I) -> Result<Self, Violation>
    where
        I: IntoIterator<Item = Vec<u32>>,
    {
        if r < 2 {
            return Err(Violation::Uniformity(r));
        }
        let mut rows = Vec::new();
        for e in edges {
            if e.len() != r {
                return Err(Violation::Arity { vertices: e, r });
            }
            rows.push(e);
        }
        let h = Self::from_edges_unchecked(n, r, rows);
        h.validate()?;
        Ok(h)
    }

    /// Builds without validation; edges are sorted lexicographically but
    /// their contents are kept as given. Endpoints outside `1..=n` are left
    /// out of the indexes. Panics if a row does not have exactly `r` labels.
    pub fn from_edges_unchecked(n: u32, r: usize, mut rows: Vec<Vec<u32>>) -> Self {
        assert!(rows.iter().all(|e| e.len() == r), "every edge must have exactly r vertices");
        rows.sort_unstable();
        let verts = rows.concat();
        Self::from_sorted_flat(n, r, verts)
    }

    /// `verts` holds `r` labels per edge in lexicographic edge order.
    pub(crate) fn from_sorted_flat(n: u32, r: usize, verts: Vec<u32>) -> Self {
        let m = verts.len().checked_div(r).unwrap_or(0);
        let in_range = |v: u32| (1..=n).contains(&v).then_some(v);
        let by_first = Buckets::build(n, m, |e| in_range(verts[e * r]));
        let by_last = Buckets::build(n, m, |e| in_range(verts[e * r + r - 1]));
        OrderedHypergraph {
            n,
            r,
            verts,
            by_first,
            by_last,
        }
    }

    pub fn empty(n: u32, r: usize) -> Self {
        Self::from_sorted_flat(n, r, Vec::new())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn edge_count(&self) -> usize {
        self.verts.len().checked_div(self.r).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    pub fn edge(&self, id: EdgeId) -> &[u32] {
        let s = id as usize * self.r;
        &self.verts[s..s + self.r]
    }

    pub fn first(&self, id: EdgeId) -> u32 {
        self.verts[id as usize * self.r]
    }

    pub fn last(&self, id: EdgeId) -> u32 {
        self.verts[id as usize * self.r + self.r - 1]
    }

    pub fn length(&self, id: EdgeId) -> u32 {
        self.last(id) - self.first(id)
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> impl ExactSizeIterator<Item = &[u32]> + '_ {
        self.verts.chunks_exact(self.r.max(1))
    }

    pub fn to_edges(&self) -> Vec<Edge> {
        self.edges().map(Edge::from_slice_unchecked).collect()
    }

    /// Edge ids with `first(e) = v`, ascending.
    pub fn by_first(&self, v: u32) -> &[EdgeId] {
        self.by_first.get(v)
    }

    /// Edge ids with `last(e) = v`, ascending.
    pub fn by_last(&self, v: u32) -> &[EdgeId] {
        self.by_last.get(v)
    }

    pub fn contains(&self, vertices: &[u32]) -> bool {
        if vertices.len() != self.r || vertices.is_empty() {
            return false;
        }
        self.by_first(vertices[0])
            .iter()
            .any(|&id| self.edge(id) == vertices)
    }

    /// Returns a copy with one more edge; `None` if the edge is already present
    /// or malformed for this hypergraph.
    pub fn with_edge(&self, vertices: &[u32]) -> Option<Self> {
        if vertices.len() != self.r
            || !strictly_increasing(vertices)
            || vertices[0] < 1
            || vertices[self.r - 1] > self.n
            || self.contains(vertices)
        {
            return None;
        }
        let mut rows: Vec<Vec<u32>> = self.edges().map(<[u32]>::to_vec).collect();
        rows.push(vertices.to_vec());
        Some(Self::from_edges_unchecked(self.n, self.r, rows))
    }

    /// Checks every structural invariant and reports the first violation.
    pub fn validate(&self) -> Result<(), Violation> {
        if self.r < 2 {
            return Err(Violation::Uniformity(self.r));
        }
        if self.n < self.r as u32 && !self.is_empty() {
            return Err(Violation::TooFewVertices { n: self.n, r: self.r });
        }
        let mut prev: Option<&[u32]> = None;
        for e in self.edges() {
            if !strictly_increasing(e) {
                return Err(Violation::Ordering { vertices: e.to_vec() });
            }
            if e[0] < 1 || e[self.r - 1] > self.n {
                return Err(Violation::Range {
                    vertices: e.to_vec(),
                    n: self.n,
                });
            }
            if prev == Some(e) {
                return Err(Violation::Duplicate { vertices: e.to_vec() });
            }
            prev = Some(e);
        }
        let m = self.edge_count();
        for (buckets, key) in [
            (&self.by_first, 0usize),
            (&self.by_last, self.r - 1),
        ] {
            if buckets.ids.len() != m {
                let edge = (0..m as EdgeId)
                    .find(|&id| !buckets.get(self.edge(id)[key]).contains(&id))
                    .unwrap_or(0);
                return Err(Violation::Index { edge });
            }
            for v in 1..=self.n {
                for &id in buckets.get(v) {
                    if id as usize >= m || self.edge(id)[key] != v {
                        return Err(Violation::Index { edge: id });
                    }
                }
            }
        }
        Ok(())
    }
}

/// The blocks `{j, …, j + r - 1}` for `j = 1..=n-r+1`, each flagged present
/// or absent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitEdgeMask {
    n: u32,
    r: usize,
    present: Vec<bool>,
}

impl UnitEdgeMask {
    pub fn new(n: u32, r: usize, present: Vec<bool>) -> crate::Result<Self> {
        if r < 2 || (n as usize) < r {
            return Err(crate::Error::invalid(format!("unit mask needs 2 <= r <= n, got n={n}, r={r}")));
        }
        let slots = n as usize - r + 1;
        if present.len() != slots {
            return Err(crate::Error::invalid(format!(
                "unit mask for n={n}, r={r} needs {slots} entries, got {}",
                present.len()
            )));
        }
        Ok(Self { n, r, present })
    }

    /// Mask whose present blocks start at the given 1-based positions.
    pub fn from_positions(n: u32, r: usize, starts: &[u32]) -> crate::Result<Self> {
        if r < 2 || (n as usize) < r {
            return Err(crate::Error::invalid(format!("unit mask needs 2 <= r <= n, got n={n}, r={r}")));
        }
        let mut present = vec![false; n as usize - r + 1];
        for &j in starts {
            let slot = (j as usize)
                .checked_sub(1)
                .filter(|&s| s < present.len())
                .ok_or_else(|| crate::Error::invalid(format!("block start {j} out of range")))?;
            present[slot] = true;
        }
        Self::new(n, r, present)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Number of block positions, `n - r + 1`.
    pub fn len(&self) -> usize {
        self.present.len()
    }

    pub fn is_empty(&self) -> bool {
        self.present.is_empty()
    }

    /// Whether the block starting at 1-based position `j` is an edge.
    pub fn is_present(&self, j: u32) -> bool {
        j >= 1 && self.present.get(j as usize - 1).copied().unwrap_or(false)
    }

    pub fn present(&self) -> &[bool] {
        &self.present
    }

    pub fn present_count(&self) -> usize {
        self.present.iter().filter(|&&b| b).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(n: u32, r: usize, edges: &[&[u32]]) -> OrderedHypergraph {
        OrderedHypergraph::from_edges(n, r, edges.iter().map(|e| e.to_vec())).unwrap()
    }

    #[test]
    fn edge_lengths() {
        assert_eq!(Edge::new(vec![1, 2, 3]).unwrap().length(), 2);
        assert_eq!(Edge::new(vec![2, 5, 9]).unwrap().length(), 7);
        assert!(matches!(Edge::new(vec![3, 2, 5]), Err(Violation::Ordering { .. })));
        assert!(matches!(Edge::new(vec![2, 2]), Err(Violation::Ordering { .. })));
    }

    #[test]
    fn indexes_partition_edges() {
        let g = h(6, 3, &[&[1, 2, 3], &[1, 2, 6], &[3, 4, 5], &[2, 4, 5]]);
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.by_first(1).len(), 2);
        assert_eq!(g.by_last(5).len(), 2);
        assert!(g.by_first(6).is_empty());
        // ascending ids within a bucket = lexicographic order
        let b: Vec<&[u32]> = g.by_first(1).iter().map(|&e| g.edge(e)).collect();
        assert_eq!(b, vec![&[1, 2, 3][..], &[1, 2, 6][..]]);
        assert!(g.validate().is_ok());
        assert!(g.contains(&[2, 4, 5]));
        assert!(!g.contains(&[2, 4, 6]));
    }

    #[test]
    fn validate_reports_duplicates_and_ordering() {
        let dup = OrderedHypergraph::from_edges_unchecked(5, 2, vec![vec![1, 2], vec![3, 4], vec![1, 2]]);
        assert!(matches!(dup.validate(), Err(Violation::Duplicate { .. })));
        let unsorted = OrderedHypergraph::from_edges_unchecked(5, 3, vec![vec![1, 2, 3], vec![4, 2, 5]]);
        assert!(matches!(unsorted.validate(), Err(Violation::Ordering { .. })));
        let range = OrderedHypergraph::from_edges_unchecked(4, 2, vec![vec![1, 9]]);
        assert!(matches!(range.validate(), Err(Violation::Range { .. })));
        let zero = OrderedHypergraph::from_edges_unchecked(4, 2, vec![vec![0, 2]]);
        assert!(matches!(zero.validate(), Err(Violation::Range { .. })));
        assert!(matches!(
            OrderedHypergraph::from_edges(5, 3, vec![vec![1, 2]]),
            Err(Violation::Arity { .. })
        ));
        assert!(matches!(
            OrderedHypergraph::from_edges(5, 1, Vec::<Vec<u32>>::new()),
            Err(Violation::Uniformity(1))
        ));
    }

    #[test]
    fn with_edge_adds_once() {
        let g = h(5, 2, &[&[1, 2]]);
        let g2 = g.with_edge(&[2, 5]).unwrap();
        assert_eq!(g2.edge_count(), 2);
        assert!(g2.with_edge(&[2, 5]).is_none());
        assert!(g2.with_edge(&[5, 6]).is_none());
        assert!(g2.validate().is_ok());
    }

    #[test]
    fn unit_mask_length_is_checked() {
        assert!(UnitEdgeMask::new(5, 3, vec![true; 3]).is_ok());
        assert!(UnitEdgeMask::new(5, 3, vec![true; 4]).is_err());
        let m = UnitEdgeMask::from_positions(6, 3, &[1, 4]).unwrap();
        assert!(m.is_present(1) && m.is_present(4) && !m.is_present(2));
        assert!(!m.is_present(0) && !m.is_present(9));
        assert!(UnitEdgeMask::from_positions(6, 3, &[5]).is_err());
    }

    #[test]
    fn edge_serde_rejects_unsorted() {
        let e: Edge = serde_json::from_str("[1,4,7]").unwrap();
        assert_eq!(e.vertices(), &[1, 4, 7]);
        assert!(serde_json::from_str::<Edge>("[4,1,7]").is_err());
    }
}
