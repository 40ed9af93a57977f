//! Simple undirected graphs, vertex subsets and cut arithmetic.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::SymmetricMatrix;
use crate::partition::PairPartition;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("edge ({0}, {1}) has an endpoint outside 0..{2}")]
    EndpointOutOfRange(usize, usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} outside 0..{n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("vertex set has ground size {found}, graph has {expected} vertices")]
    SizeMismatch { expected: usize, found: usize },
    #[error("invalid generator parameters: {0}")]
    InvalidParameters(String),
}

/// A subset of `{0, .., n-1}` stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet {
    n: usize,
    words: Vec<u64>,
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for v in 0..n {
            s.insert(v);
        }
        s
    }

    pub fn from_vertices(n: usize, vertices: impl IntoIterator<Item = usize>) -> Result<Self, GraphError> {
        let mut s = Self::empty(n);
        for v in vertices {
            if v >= n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n });
            }
            s.insert(v);
        }
        Ok(s)
    }

    /// Bit `v` of `mask` is membership of vertex `v`. Requires `n <= 64`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        assert!(n <= 64, "mask construction needs n <= 64");
        let mut s = Self::empty(n);
        if n > 0 {
            let keep = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
            s.words[0] = mask & keep;
        }
        s
    }

    /// The bitmask for `n <= 64`, `None` otherwise.
    pub fn as_mask(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    /// Lowercase hex of the bitmask, most significant word first, `0x` prefixed.
    pub fn to_hex(&self) -> String {
        let mut out = String::from("0x");
        let mut started = false;
        for w in self.words.iter().rev() {
            if started {
                out.push_str(&format!("{w:016x}"));
            } else if *w != 0 {
                out.push_str(&format!("{w:x}"));
                started = true;
            }
        }
        if !started {
            out.push('0');
        }
        out
    }

    #[inline]
    pub fn ground_size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.n && (self.words[v / 64] >> (v % 64)) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.words[v / 64] |= 1 << (v % 64);
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.words[v / 64] &= !(1 << (v % 64));
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn complement(&self) -> Self {
        let mut s = Self::empty(self.n);
        for v in 0..self.n {
            if !self.contains(v) {
                s.insert(v);
            }
        }
        s
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&v| self.contains(v))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// An undirected simple graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    /// Sorted `(u, v)` pairs with `u < v`.
    edges: Vec<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph, silently dropping duplicate edges.
    pub fn from_edge_list(n: usize, pairs: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut set = BTreeSet::new();
        for &(u, v) in pairs {
            if u >= n || v >= n {
                return Err(GraphError::EndpointOutOfRange(u, v, n));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            set.insert((u.min(v), u.max(v)));
        }
        let edges: Vec<_> = set.into_iter().collect();
        let mut neighbors = vec![Vec::new(); n];
        for &(u, v) in &edges {
            neighbors[u].push(v);
            neighbors[v].push(u);
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        Ok(Self { n, edges, neighbors })
    }

    pub fn empty(n: usize) -> Self {
        Self {
            n,
            edges: Vec::new(),
            neighbors: vec![Vec::new(); n],
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.neighbors.iter().map(Vec::len).collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.neighbors[u].binary_search(&v).is_ok()
    }

    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &w in &self.neighbors[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn adjacency_matrix(&self) -> SymmetricMatrix {
        let mut m = SymmetricMatrix::zeros(self.n);
        for &(u, v) in &self.edges {
            m.set(u, v, 1.0);
        }
        m
    }

    /// `L = D − A`.
    pub fn laplacian_matrix(&self) -> SymmetricMatrix {
        let mut m = SymmetricMatrix::zeros(self.n);
        for &(u, v) in &self.edges {
            m.set(u, v, -1.0);
            m.add_to(u, u, 1.0);
            m.add_to(v, v, 1.0);
        }
        m
    }

    /// `G[A]`, reindexed so that the `k`-th smallest member of `A` becomes vertex `k`.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<Graph, GraphError> {
        let mut index = vec![usize::MAX; self.n];
        let mut sorted: Vec<usize> = vertices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for (k, &v) in sorted.iter().enumerate() {
            if v >= self.n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n: self.n });
            }
            index[v] = k;
        }
        let pairs: Vec<_> = self
            .edges
            .iter()
            .filter(|&&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|&(u, v)| (index[u], index[v]))
            .collect();
        Graph::from_edge_list(sorted.len(), &pairs)
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Graph, GraphError> {
        if perm.len() != self.n {
            return Err(GraphError::SizeMismatch {
                expected: self.n,
                found: perm.len(),
            });
        }
        let pairs: Vec<_> = self.edges.iter().map(|&(u, v)| (perm[u], perm[v])).collect();
        Graph::from_edge_list(self.n, &pairs)
    }

    /// Disjoint union with `k` isolated vertices appended.
    pub fn with_isolated(&self, k: usize) -> Graph {
        Graph::from_edge_list(self.n + k, &self.edges).expect("existing edges stay valid")
    }

    pub fn cut_stats(&self, s: &VertexSet) -> Result<CutStats, GraphError> {
        self.check_set(s)?;
        Ok(self.cut_stats_unchecked(|v| s.contains(v)))
    }

    /// Cut counts for a bitmask subset; requires `n <= 64`.
    pub fn cut_stats_mask(&self, mask: u64) -> CutStats {
        self.cut_stats_unchecked(|v| (mask >> v) & 1 == 1)
    }

    fn cut_stats_unchecked(&self, member: impl Fn(usize) -> bool) -> CutStats {
        let (mut e_in, mut e_out, mut crossing) = (0u64, 0u64, 0u64);
        for &(u, v) in &self.edges {
            match (member(u), member(v)) {
                (true, true) => e_in += 1,
                (false, false) => e_out += 1,
                _ => crossing += 1,
            }
        }
        CutStats {
            e_in,
            e_out,
            crossing,
            e_min: e_in.min(e_out),
        }
    }

    fn check_set(&self, s: &VertexSet) -> Result<(), GraphError> {
        if s.ground_size() != self.n {
            return Err(GraphError::SizeMismatch {
                expected: self.n,
                found: s.ground_size(),
            });
        }
        Ok(())
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges)
    }
}

/// Edge counts of a cut `(S, S^c)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutStats {
    /// Edges with both endpoints in `S`.
    pub e_in: u64,
    /// Edges with both endpoints outside `S`.
    pub e_out: u64,
    pub crossing: u64,
    pub e_min: u64,
}

/// A vertex subset `S` together with its side fractions `p = |S|/n`, `q = 1 − p`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cut {
    set: VertexSet,
    p: f64,
    q: f64,
}

impl Cut {
    pub fn new(set: VertexSet) -> Self {
        let n = set.ground_size();
        let (p, q) = if n == 0 {
            (0.0, 1.0)
        } else {
            let k = set.len();
            (k as f64 / n as f64, (n - k) as f64 / n as f64)
        };
        Self { set, p, q }
    }

    pub fn set(&self) -> &VertexSet {
        &self.set
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.set.ground_size()
    }

    /// `S ≠ ∅` and `S ≠ V`.
    pub fn is_proper(&self) -> bool {
        let k = self.set.len();
        k > 0 && k < self.n()
    }

    /// The signed vector with `q` on `S` and `−p` off `S`; it sums to zero.
    pub fn vector(&self) -> Vec<f64> {
        (0..self.n())
            .map(|v| if self.set.contains(v) { self.q } else { -self.p })
            .collect()
    }
}

// ---------------------------------------------------------------------------
// generators
// ---------------------------------------------------------------------------

/// `K_{1,k}` with the centre at vertex 0.
pub fn star(k: usize) -> Result<Graph, GraphError> {
    if k == 0 {
        return Err(GraphError::InvalidParameters("star needs k >= 1 leaves".into()));
    }
    let pairs: Vec<_> = (1..=k).map(|v| (0, v)).collect();
    Graph::from_edge_list(k + 1, &pairs)
}

pub fn complete(n: usize) -> Graph {
    let mut pairs = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for u in 0..n {
        for v in (u + 1)..n {
            pairs.push((u, v));
        }
    }
    Graph::from_edge_list(n, &pairs).expect("complete graph edges are valid")
}

pub fn path(n: usize) -> Graph {
    let pairs: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    Graph::from_edge_list(n, &pairs).expect("path edges are valid")
}

pub fn cycle(n: usize) -> Result<Graph, GraphError> {
    if n < 3 {
        return Err(GraphError::InvalidParameters("cycle needs n >= 3".into()));
    }
    let pairs: Vec<_> = (0..n).map(|v| (v, (v + 1) % n)).collect();
    Graph::from_edge_list(n, &pairs)
}

pub fn complete_bipartite(a: usize, b: usize) -> Result<Graph, GraphError> {
    if a == 0 || b == 0 {
        return Err(GraphError::InvalidParameters("complete bipartite needs a, b >= 1".into()));
    }
    complete_multipartite(&[a, b])
}

/// Complete multipartite graph; parts are consecutive vertex ranges.
pub fn complete_multipartite(sizes: &[usize]) -> Result<Graph, GraphError> {
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(GraphError::InvalidParameters(
            "multipartite sizes must be nonempty with positive parts".into(),
        ));
    }
    let mut part = Vec::new();
    for (i, &s) in sizes.iter().enumerate() {
        part.extend(std::iter::repeat_n(i, s));
    }
    let n = part.len();
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if part[u] != part[v] {
                pairs.push((u, v));
            }
        }
    }
    Graph::from_edge_list(n, &pairs)
}

/// Erdős–Rényi `G(n, prob)`, deterministic for a fixed seed.
pub fn random_gnp(n: usize, prob: f64, seed: u64) -> Result<Graph, GraphError> {
    if !(0.0..=1.0).contains(&prob) {
        return Err(GraphError::InvalidParameters(format!("edge probability {prob} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(prob) {
                pairs.push((u, v));
            }
        }
    }
    Graph::from_edge_list(n, &pairs)
}

/// Two triangles `{0,1,2}` and `{3,4,5}` joined by the edge `(2,3)`.
pub fn triangles_with_bridge() -> Graph {
    Graph::from_edge_list(6, &[(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (2, 3)])
        .expect("fixed edge list")
}

/// Edge pattern placed on the vertices of one block by [`design_graph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlockPattern {
    Complete,
    /// Complete bipartite between the lower and upper half of the sorted block
    /// (the lower half gets `⌊k/2⌋` vertices).
    CompleteBipartiteHalves,
    /// Star centred at the smallest member.
    StarAtFirst,
    Empty,
}

impl BlockPattern {
    pub const ALL: [BlockPattern; 4] = [
        BlockPattern::Complete,
        BlockPattern::CompleteBipartiteHalves,
        BlockPattern::StarAtFirst,
        BlockPattern::Empty,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Complete => "complete",
            Self::CompleteBipartiteHalves => "complete-bipartite-halves",
            Self::StarAtFirst => "star-at-first",
            Self::Empty => "empty",
        }
    }

    /// Whether every member of a block of size >= 2 receives at least one edge.
    pub fn covers_block(self) -> bool {
        !matches!(self, Self::Empty)
    }

    fn edges(self, block: &[usize], out: &mut Vec<(usize, usize)>) {
        match self {
            Self::Complete => {
                for (k, &u) in block.iter().enumerate() {
                    out.extend(block[k + 1..].iter().map(|&v| (u, v)));
                }
            }
            Self::CompleteBipartiteHalves => {
                let (lo, hi) = block.split_at(block.len() / 2);
                for &u in lo {
                    out.extend(hi.iter().map(|&v| (u, v)));
                }
            }
            Self::StarAtFirst => {
                if let Some((&centre, rest)) = block.split_first() {
                    out.extend(rest.iter().map(|&v| (centre, v)));
                }
            }
            Self::Empty => {}
        }
    }
}

impl std::str::FromStr for BlockPattern {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| GraphError::InvalidParameters(format!("unknown block pattern `{s}`")))
    }
}

/// Places `pattern` on every block of `partition`. Blocks share no pair, so
/// the result is the disjoint union of the per-block edge sets.
pub fn design_graph(partition: &PairPartition, pattern: BlockPattern) -> Graph {
    design_graph_mixed(partition, |_| pattern)
}

/// Like [`design_graph`] with a pattern chosen per block index.
pub fn design_graph_mixed(partition: &PairPartition, mut pattern: impl FnMut(usize) -> BlockPattern) -> Graph {
    let mut pairs = Vec::new();
    for (i, block) in partition.blocks().iter().enumerate() {
        pattern(i).edges(block, &mut pairs);
    }
    Graph::from_edge_list(partition.n(), &pairs).expect("blocks of a valid partition are in range")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_edge_list_examples() {
        let p3 = Graph::from_edge_list(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(p3.degrees(), vec![1, 2, 1]);
        assert_eq!(p3, path(3));

        let e = Graph::from_edge_list(2, &[]).unwrap();
        assert_eq!(e.degrees(), vec![0, 0]);
        assert_eq!(e.edge_count(), 0);

        let g = Graph::from_edge_list(4, &[(0, 1), (0, 1), (2, 3)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        let g = Graph::from_edge_list(4, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn from_edge_list_errors() {
        assert_eq!(
            Graph::from_edge_list(3, &[(0, 3)]),
            Err(GraphError::EndpointOutOfRange(0, 3, 3))
        );
        assert_eq!(Graph::from_edge_list(3, &[(1, 1)]), Err(GraphError::SelfLoop(1)));
    }

    #[test]
    fn cut_stats_examples() {
        let k4 = complete(4);
        let s = VertexSet::from_vertices(4, [0, 1]).unwrap();
        let st = k4.cut_stats(&s).unwrap();
        assert_eq!((st.e_in, st.e_out, st.crossing, st.e_min), (1, 1, 4, 1));

        let k22 = complete_bipartite(2, 2).unwrap();
        let st = k22.cut_stats(&VertexSet::from_vertices(4, [0, 1]).unwrap()).unwrap();
        assert_eq!((st.e_in, st.e_out, st.crossing), (0, 0, 4));

        let st = k4.cut_stats(&VertexSet::empty(4)).unwrap();
        assert_eq!((st.e_in, st.e_out, st.crossing), (0, 6, 0));

        assert!(k4.cut_stats(&VertexSet::empty(5)).is_err());
        assert!(VertexSet::from_vertices(4, [4]).is_err());
    }

    #[test]
    fn cut_vector_examples() {
        let cut = Cut::new(VertexSet::from_vertices(4, [0]).unwrap());
        assert_eq!(cut.vector(), vec![0.75, -0.25, -0.25, -0.25]);
        let cut = Cut::new(VertexSet::from_vertices(2, [0]).unwrap());
        assert_eq!(cut.vector(), vec![0.5, -0.5]);
        let cut = Cut::new(VertexSet::full(4));
        assert_eq!(cut.vector(), vec![0.0; 4]);
        assert!(!cut.is_proper());
    }

    #[test]
    fn matrices() {
        let lap = path(3).laplacian_matrix();
        for i in 0..3 {
            assert_eq!(lap.row(i).iter().sum::<f64>(), 0.0);
        }
        assert_eq!(Graph::empty(3).laplacian_matrix(), SymmetricMatrix::zeros(3));
        let a = path(3).adjacency_matrix();
        assert_eq!(a.get(0, 1), 1.0);
        assert_eq!(a.get(0, 2), 0.0);
    }

    #[test]
    fn induced_subgraph_examples() {
        assert_eq!(complete(4).induced_subgraph(&[0, 1, 2]).unwrap(), complete(3));
        let p = path(4).induced_subgraph(&[3, 0, 1]).unwrap();
        assert_eq!(p.edges(), &[(0, 1)]);
        assert!(path(3).induced_subgraph(&[5]).is_err());
    }

    #[test]
    fn generator_examples() {
        let s = star(3).unwrap();
        assert_eq!(s.n(), 4);
        assert_eq!(s.edge_count(), 3);
        assert_eq!(s.degrees(), vec![3, 1, 1, 1]);
        assert_eq!(complete_multipartite(&[1, 1, 1]).unwrap(), complete(3));
        assert!(star(0).is_err());
        assert!(complete_bipartite(0, 2).is_err());
        assert!(complete_multipartite(&[]).is_err());
        assert!(complete_multipartite(&[2, 0]).is_err());
        assert!(random_gnp(5, 1.5, 0).is_err());
        assert_eq!(random_gnp(9, 0.4, 7).unwrap(), random_gnp(9, 0.4, 7).unwrap());
        assert_eq!(random_gnp(6, 1.0, 1).unwrap(), complete(6));
        assert_eq!(triangles_with_bridge().edge_count(), 7);
    }

    #[test]
    fn design_graph_examples() {
        use crate::partition::{all_pairs_partition, near_pencil};
        assert_eq!(design_graph(&near_pencil(5).unwrap(), BlockPattern::Complete), complete(5));
        assert_eq!(design_graph(&all_pairs_partition(6).unwrap(), BlockPattern::Complete), complete(6));
        assert_eq!(design_graph(&near_pencil(5).unwrap(), BlockPattern::Empty).edge_count(), 0);

        let np = near_pencil(6).unwrap();
        // long line {0..4}: halves {0,1} x {2,3,4}, plus 5 spokes
        let g = design_graph(&np, BlockPattern::CompleteBipartiteHalves);
        assert_eq!(g.edge_count(), 6 + 5);
        assert!(g.has_edge(0, 4) && !g.has_edge(0, 1) && !g.has_edge(2, 3));
        let g = design_graph(&np, BlockPattern::StarAtFirst);
        assert_eq!(g.edge_count(), 4 + 5);
        assert_eq!(g.degree(0), 5);

        for p in BlockPattern::ALL {
            assert_eq!(p.name().parse::<BlockPattern>().unwrap(), p);
        }
        assert!("wheel".parse::<BlockPattern>().is_err());
    }

    #[test]
    fn vertex_set_hex() {
        assert_eq!(VertexSet::empty(3).to_hex(), "0x0");
        assert_eq!(VertexSet::from_mask(8, 0b1011).to_hex(), "0xb");
        let s = VertexSet::from_vertices(70, [0, 65]).unwrap();
        assert_eq!(s.to_hex(), "0x20000000000000001");
        assert_eq!(s.as_mask(), None);
    }

    #[test]
    fn connectivity() {
        assert!(complete(5).is_connected());
        assert!(!Graph::empty(2).is_connected());
        assert!(!triangles_with_bridge().induced_subgraph(&[0, 1, 4, 5]).unwrap().is_connected());
    }
}
