//! Pairwise block partitions: families of blocks, each of size at least two,
//! such that every unordered vertex pair lies in exactly one block.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError};
use crate::smallness::{minimal_c, SmallnessError, Tolerances, Verdict};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PartitionError {
    #[error("block {block} contains vertex {vertex} outside 0..{n}")]
    MemberOutOfRange { block: usize, vertex: usize, n: usize },
    #[error("blocks do not form a pairwise partition: {0}")]
    Invalid(String),
    #[error("partition covers {partition} vertices, graph has {graph}")]
    SizeMismatch { partition: usize, graph: usize },
    #[error("invalid generator parameters: {0}")]
    InvalidParameters(String),
}

/// Result of auditing a block family against the two partition conditions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionValidationReport {
    pub valid: bool,
    /// Indices (after canonical ordering) of blocks with fewer than two vertices.
    pub undersized_blocks: Vec<usize>,
    pub uncovered_pairs: Vec<(usize, usize)>,
    /// Pairs lying in more than one block, with their multiplicity.
    pub multiply_covered_pairs: Vec<((usize, usize), usize)>,
}

impl PartitionValidationReport {
    pub fn summary(&self) -> String {
        if self.valid {
            return "valid".into();
        }
        let mut parts = Vec::new();
        if !self.undersized_blocks.is_empty() {
            parts.push(format!("{} block(s) with fewer than 2 vertices", self.undersized_blocks.len()));
        }
        if !self.uncovered_pairs.is_empty() {
            parts.push(format!("{} uncovered pair(s)", self.uncovered_pairs.len()));
        }
        if !self.multiply_covered_pairs.is_empty() {
            parts.push(format!("{} multiply covered pair(s)", self.multiply_covered_pairs.len()));
        }
        parts.join(", ")
    }
}

/// Sorts members, drops repeats, and sorts blocks lexicographically.
fn canonicalize(blocks: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = blocks
        .iter()
        .map(|b| {
            let mut b = b.clone();
            b.sort_unstable();
            b.dedup();
            b
        })
        .collect();
    out.sort();
    out
}

/// Exhaustive audit of every pair of `0..n`.
pub fn validate(n: usize, blocks: &[Vec<usize>]) -> Result<PartitionValidationReport, PartitionError> {
    let blocks = canonicalize(blocks);
    for (i, b) in blocks.iter().enumerate() {
        if let Some(&v) = b.iter().find(|&&v| v >= n) {
            return Err(PartitionError::MemberOutOfRange { block: i, vertex: v, n });
        }
    }
    let undersized_blocks: Vec<usize> = blocks
        .iter()
        .enumerate()
        .filter(|(_, b)| b.len() < 2)
        .map(|(i, _)| i)
        .collect();

    let mut cover = vec![0usize; n * n];
    for b in &blocks {
        for (k, &u) in b.iter().enumerate() {
            for &v in &b[k + 1..] {
                cover[u * n + v] += 1;
            }
        }
    }
    let mut uncovered_pairs = Vec::new();
    let mut multiply_covered_pairs = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            match cover[u * n + v] {
                0 => uncovered_pairs.push((u, v)),
                1 => {}
                k => multiply_covered_pairs.push(((u, v), k)),
            }
        }
    }
    let valid = undersized_blocks.is_empty() && uncovered_pairs.is_empty() && multiply_covered_pairs.is_empty();
    Ok(PartitionValidationReport {
        valid,
        undersized_blocks,
        uncovered_pairs,
        multiply_covered_pairs,
    })
}

/// A validated pairwise partition of `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
    replication: Vec<usize>,
}

impl PairPartition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self, PartitionError> {
        let report = validate(n, &blocks)?;
        if !report.valid {
            return Err(PartitionError::Invalid(report.summary()));
        }
        let blocks = canonicalize(&blocks);
        let mut replication = vec![0; n];
        for b in &blocks {
            for &v in b {
                replication[v] += 1;
            }
        }
        Ok(Self { n, blocks, replication })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// `r_v`, the number of blocks through each vertex.
    pub fn replication(&self) -> &[usize] {
        &self.replication
    }

    pub fn max_block_size(&self) -> usize {
        self.blocks.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Applies the vertex relabeling `v -> perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self, PartitionError> {
        if perm.len() != self.n {
            return Err(PartitionError::SizeMismatch {
                partition: self.n,
                graph: perm.len(),
            });
        }
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|&v| perm[v]).collect())
            .collect();
        Self::new(self.n, blocks)
    }
}

/// The single block `V`.
pub fn trivial_partition(n: usize) -> Result<PairPartition, PartitionError> {
    if n < 2 {
        return Err(PartitionError::InvalidParameters("trivial partition needs n >= 2".into()));
    }
    PairPartition::new(n, vec![(0..n).collect()])
}

/// Every 2-subset of `V` as its own block.
pub fn all_pairs_partition(n: usize) -> Result<PairPartition, PartitionError> {
    if n < 2 {
        return Err(PartitionError::InvalidParameters("all-pairs partition needs n >= 2".into()));
    }
    let mut blocks = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            blocks.push(vec![u, v]);
        }
    }
    PairPartition::new(n, blocks)
}

/// One line `{0..n-2}` plus the lines `{i, n-1}`.
pub fn near_pencil(n: usize) -> Result<PairPartition, PartitionError> {
    if n < 3 {
        return Err(PartitionError::InvalidParameters("near-pencil needs n >= 3".into()));
    }
    let mut blocks = vec![(0..n - 1).collect::<Vec<_>>()];
    blocks.extend((0..n - 1).map(|i| vec![i, n - 1]));
    PairPartition::new(n, blocks)
}

fn is_prime(q: usize) -> bool {
    q >= 2 && (2..q).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))
}

/// Lines of the affine plane over the integers mod a prime `q`.
/// Point `(x, y)` is vertex `x * q + y`.
pub fn affine_plane(q: usize) -> Result<PairPartition, PartitionError> {
    if !is_prime(q) || q > 13 {
        return Err(PartitionError::InvalidParameters(format!(
            "affine plane order must be a prime in 2..=13, got {q}"
        )));
    }
    let point = |x: usize, y: usize| x * q + y;
    let mut blocks = Vec::with_capacity(q * q + q);
    // y = m x + b
    for m in 0..q {
        for b in 0..q {
            blocks.push((0..q).map(|x| point(x, (m * x + b) % q)).collect());
        }
    }
    // x = a
    for a in 0..q {
        blocks.push((0..q).map(|y| point(a, y)).collect());
    }
    PairPartition::new(q * q, blocks)
}

/// A random pairwise partition: greedily places random blocks of size
/// `3..=max_block` whose pairs are still uncovered, then covers the remaining
/// pairs with 2-blocks. Deterministic for a fixed seed.
pub fn random_linear_space(n: usize, max_block: usize, attempts: usize, seed: u64) -> Result<PairPartition, PartitionError> {
    if n < 2 {
        return Err(PartitionError::InvalidParameters("linear space needs n >= 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut covered = vec![false; n * n];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut vertices: Vec<usize> = (0..n).collect();
    let max_block = max_block.min(n);
    for _ in 0..attempts {
        if max_block < 3 {
            break;
        }
        let size = rng.gen_range(3..=max_block);
        vertices.shuffle(&mut rng);
        let mut block: Vec<usize> = vertices[..size].to_vec();
        block.sort_unstable();
        let fresh = block
            .iter()
            .enumerate()
            .all(|(k, &u)| block[k + 1..].iter().all(|&v| !covered[u * n + v]));
        if fresh {
            for (k, &u) in block.iter().enumerate() {
                for &v in &block[k + 1..] {
                    covered[u * n + v] = true;
                }
            }
            blocks.push(block);
        }
    }
    for u in 0..n {
        for v in (u + 1)..n {
            if !covered[u * n + v] {
                blocks.push(vec![u, v]);
            }
        }
    }
    PairPartition::new(n, blocks)
}

/// Per-vertex comparison of the replication number with the degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeDominanceReport {
    pub replication: Vec<usize>,
    pub degrees: Vec<usize>,
    /// Vertices with `r_v > d_v`.
    pub failing_vertices: Vec<usize>,
    pub passes: bool,
}

/// Checks `r_v <= d_v` at every vertex.
pub fn replication_degree_check(graph: &Graph, partition: &PairPartition) -> Result<DegreeDominanceReport, PartitionError> {
    check_sizes(graph, partition)?;
    let degrees = graph.degrees();
    let replication = partition.replication().to_vec();
    let failing_vertices: Vec<usize> = (0..graph.n()).filter(|&v| replication[v] > degrees[v]).collect();
    Ok(DegreeDominanceReport {
        passes: failing_vertices.is_empty(),
        replication,
        degrees,
        failing_vertices,
    })
}

fn check_sizes(graph: &Graph, partition: &PairPartition) -> Result<(), PartitionError> {
    if graph.n() != partition.n() {
        return Err(PartitionError::SizeMismatch {
            partition: partition.n(),
            graph: graph.n(),
        });
    }
    Ok(())
}

#[derive(Debug, Error)]
pub enum CertificateError {
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Smallness(#[from] SmallnessError),
}

/// The smallest uniform `c` making every block's induced subgraph `c`-small.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PartitionCertificate {
    Uniform {
        c: f64,
        /// A block attaining the maximum.
        dominant_block: usize,
        block_values: Vec<f64>,
    },
    NotSmallForAnyC {
        block: usize,
        /// Witness in the block's local coordinates (sorted block members).
        witness: Vec<f64>,
    },
}

impl PartitionCertificate {
    pub fn c(&self) -> Option<f64> {
        match self {
            Self::Uniform { c, .. } => Some(*c),
            Self::NotSmallForAnyC { .. } => None,
        }
    }
}

/// Maximum of `minimal_c(G[A_i])` over the blocks. Blocks with identical
/// induced edge sets share one computation.
pub fn partition_certificate(
    graph: &Graph,
    partition: &PairPartition,
    tolerances: Tolerances,
) -> Result<PartitionCertificate, CertificateError> {
    check_sizes(graph, partition)?;
    let mut cache: BTreeMap<(usize, Vec<(usize, usize)>), Verdict> = BTreeMap::new();
    let mut block_values = Vec::with_capacity(partition.block_count());
    let mut best = (f64::NEG_INFINITY, 0);
    for (i, block) in partition.blocks().iter().enumerate() {
        let sub = graph.induced_subgraph(block)?;
        let key = (sub.n(), sub.edges().to_vec());
        let verdict = match cache.get(&key) {
            Some(v) => v.clone(),
            None => {
                let v = minimal_c(&sub, tolerances)?.verdict;
                cache.insert(key, v.clone());
                v
            }
        };
        match verdict {
            Verdict::Small { c_min } => {
                if c_min > best.0 {
                    best = (c_min, i);
                }
                block_values.push(c_min);
            }
            Verdict::NotSmallForAnyC { witness } => {
                return Ok(PartitionCertificate::NotSmallForAnyC { block: i, witness });
            }
        }
    }
    Ok(PartitionCertificate::Uniform {
        c: best.0.max(0.0),
        dominant_block: best.1,
        block_values,
    })
}
