//! Fixtures shared by the benchmarks.

use cutcert_core::graph::{complete, design_graph, BlockPattern};
use cutcert_core::partition::{affine_plane, near_pencil};
use cutcert_core::{Graph, PairPartition};

/// `K_9` on the lines of the affine plane of order 3.
pub fn affine_k9() -> (Graph, PairPartition) {
    let p = affine_plane(3).expect("3 is prime");
    (design_graph(&p, BlockPattern::Complete), p)
}

/// `K_n` with the near-pencil partition.
pub fn near_pencil_complete(n: usize) -> (Graph, PairPartition) {
    (complete(n), near_pencil(n).expect("n >= 3"))
}
