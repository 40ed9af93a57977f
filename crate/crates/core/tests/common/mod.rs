//! Independent oracles and corpora shared by the integration tests.
#![allow(dead_code)]

use cutcert_core::graph::{complete_multipartite, random_gnp, BlockPattern};
use cutcert_core::partition::{affine_plane, near_pencil, random_linear_space};
use cutcert_core::{Graph, PairPartition, SymmetricMatrix};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// PSD test by symmetric elimination with complete (diagonal) pivoting:
/// the matrix is PSD iff no pivot is negative and every row is zero once
/// the largest remaining diagonal entry is zero.
pub fn psd_by_pivoting(m: &SymmetricMatrix, tol: f64) -> bool {
    let n = m.order();
    let mut a: Vec<Vec<f64>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut live: Vec<usize> = (0..n).collect();
    while !live.is_empty() {
        let (pos, &k) = live
            .iter()
            .enumerate()
            .max_by(|x, y| a[*x.1][*x.1].total_cmp(&a[*y.1][*y.1]))
            .unwrap();
        let pivot = a[k][k];
        if pivot < -tol {
            return false;
        }
        if pivot <= tol {
            // remaining block must vanish (up to tol), else a 2x2 minor is negative
            return live.iter().all(|&i| live.iter().all(|&j| i == j || a[i][j].abs() <= tol.sqrt()))
                && live.iter().all(|&i| a[i][i] >= -tol);
        }
        live.remove(pos);
        for &i in &live {
            for &j in &live {
                a[i][j] -= a[i][k] * a[k][j] / pivot;
            }
        }
    }
    true
}

/// Edge counts of a cut straight from the adjacency matrix.
pub fn cut_counts_by_matrix(a: &SymmetricMatrix, mask: u64) -> (u64, u64, u64) {
    let (mut e_in, mut e_out, mut crossing) = (0u64, 0u64, 0u64);
    for i in 0..a.order() {
        for j in (i + 1)..a.order() {
            if a.get(i, j) == 0.0 {
                continue;
            }
            match ((mask >> i) & 1, (mask >> j) & 1) {
                (1, 1) => e_in += 1,
                (0, 0) => e_out += 1,
                _ => crossing += 1,
            }
        }
    }
    (e_in, e_out, crossing)
}

pub fn random_permutation(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// Random composition of `total` into `parts` positive parts.
pub fn random_sizes(total: usize, parts: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut sizes = vec![1; parts];
    for _ in parts..total {
        let k = rng.gen_range(0..parts);
        sizes[k] += 1;
    }
    sizes
}

/// Mix of sparse/dense random graphs and relabeled complete multipartite
/// graphs, all on at most 8 vertices.
pub fn smallness_corpus(count: usize, seed: u64) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let n = rng.gen_range(2..=8);
            if i % 3 == 2 {
                let parts = rng.gen_range(1..=n);
                let g = complete_multipartite(&random_sizes(n, parts, &mut rng)).unwrap();
                g.relabeled(&random_permutation(n, &mut rng)).unwrap()
            } else {
                let p = [0.2, 0.35, 0.5, 0.65, 0.8][rng.gen_range(0..5)];
                random_gnp(n, p, rng.gen()).unwrap()
            }
        })
        .collect()
}

pub const COVERING_PATTERNS: [BlockPattern; 3] = [
    BlockPattern::Complete,
    BlockPattern::CompleteBipartiteHalves,
    BlockPattern::StarAtFirst,
];

/// Random pairwise partitions on at most `max_n` vertices.
pub fn random_partition(max_n: usize, rng: &mut ChaCha8Rng) -> PairPartition {
    match rng.gen_range(0..6) {
        0 => near_pencil(rng.gen_range(3..=max_n)).unwrap(),
        1 if max_n >= 9 => affine_plane(3).unwrap(),
        1 => affine_plane(2).unwrap(),
        _ => {
            let n = rng.gen_range(4..=max_n);
            random_linear_space(n, rng.gen_range(3..=n.min(6)), 40, rng.gen()).unwrap()
        }
    }
}

pub fn relabel_partition(p: &PairPartition, rng: &mut ChaCha8Rng) -> PairPartition {
    p.relabeled(&random_permutation(p.n(), rng)).unwrap()
}
