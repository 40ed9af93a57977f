mod common;

use common::*;
use cutcert_core::analyzer::{
    cut_rows, fiedler_value, sample_cuts_verify, sparsity_profile, verify_bound, BoundSpec, CutMode, VerifyOptions,
};
use cutcert_core::bounds::RefinedVariant;
use cutcert_core::graph::{complete, design_graph, design_graph_mixed, random_gnp, BlockPattern};
use cutcert_core::partition::{affine_plane, all_pairs_partition, near_pencil, trivial_partition};
use cutcert_core::smallness::Tolerances;
use cutcert_core::{Graph, PairPartition};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn generator_partitions(max_n: usize) -> Vec<PairPartition> {
    let mut out = Vec::new();
    for n in 3..=max_n {
        out.push(trivial_partition(n).unwrap());
        out.push(near_pencil(n).unwrap());
    }
    for n in 2..=8 {
        out.push(all_pairs_partition(n).unwrap());
    }
    out.push(affine_plane(2).unwrap());
    out.push(affine_plane(3).unwrap());
    out
}

#[test]
fn design_graphs_satisfy_both_bounds() {
    let bounds = [
        BoundSpec::BASE,
        BoundSpec::refined(RefinedVariant::AsStated),
        BoundSpec::refined(RefinedVariant::Tight),
    ];
    for p in generator_partitions(14) {
        for pattern in COVERING_PATTERNS {
            let g = design_graph(&p, pattern);
            for bound in bounds {
                let r = verify_bound(&g, &p, &VerifyOptions { bound, ..VerifyOptions::default() }).unwrap();
                assert!(r.degree_dominance);
                if !r.is_applicable() {
                    // only a single complete block of size >= ... can push c to 1; never here
                    panic!("inapplicable: {:?}", r.status);
                }
                assert_eq!(r.cuts_examined, (1u64 << (p.n() - 1)) - 1);
                assert_eq!(
                    r.violation_count, 0,
                    "{} on n={} pattern {:?}: {:?}",
                    p.block_count(), p.n(), pattern, r.violations.first()
                );
            }
        }
    }
}

/// Randomized graph/partition pairs: any violation of the base bound comes
/// with a degree-dominance failure.
#[test]
fn violations_only_without_degree_dominance() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6a9);
    let (mut violating, mut applicable) = (0, 0);
    for _ in 0..200 {
        let p = relabel_partition(&random_partition(10, &mut rng), &mut rng);
        let g = match rng.gen_range(0..3) {
            0 => random_gnp(p.n(), rng.gen_range(0.1..0.9), rng.gen()).unwrap(),
            _ => {
                let patterns: Vec<BlockPattern> = (0..p.block_count())
                    .map(|_| BlockPattern::ALL[rng.gen_range(0..4)])
                    .collect();
                design_graph_mixed(&p, |b| patterns[b])
            }
        };
        let r = verify_bound(&g, &p, &VerifyOptions::default()).unwrap();
        if !r.is_applicable() {
            continue;
        }
        applicable += 1;
        if r.violation_count > 0 {
            violating += 1;
            assert!(!r.degree_dominance, "violation despite degree dominance: {g:?} {p:?}");
        }
        assert_eq!(r.violations.is_empty(), r.worst_ratio.is_some_and(|w| w >= 1.0 - 1e-9) || r.worst_ratio.is_none());
    }
    assert!(applicable >= 50, "only {applicable} applicable pairs");
    assert!(violating > 0, "corpus never exercises the hypothesis gap");
}

#[test]
fn sparsity_dominates_lambda_when_bound_holds() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5b);
    for _ in 0..60 {
        let p = relabel_partition(&random_partition(10, &mut rng), &mut rng);
        let patterns: Vec<BlockPattern> = (0..p.block_count())
            .map(|_| BlockPattern::ALL[rng.gen_range(0..4)])
            .collect();
        let g = design_graph_mixed(&p, |b| patterns[b]);
        let r = verify_bound(&g, &p, &VerifyOptions::default()).unwrap();
        if !r.holds() {
            continue;
        }
        let profile = sparsity_profile(&g).unwrap();
        if let (Some(ratio), Some(lambda)) = (profile.min_ratio, r.lambda) {
            assert!(ratio >= lambda - 1e-9, "sparsity {ratio} < λ {lambda}");
        }
    }
}

#[test]
fn fiedler_matches_connectivity() {
    for n in 2..=10 {
        assert!((fiedler_value(&complete(n)).unwrap() - n as f64).abs() < 1e-8);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xf);
    for _ in 0..80 {
        let n = rng.gen_range(2..=10);
        let g = random_gnp(n, rng.gen_range(0.05..0.6), rng.gen()).unwrap();
        let f = fiedler_value(&g).unwrap();
        if g.is_connected() {
            assert!(f > 1e-8, "connected {g:?} has fiedler {f}");
        } else {
            assert!(f.abs() <= 1e-8, "disconnected {g:?} has fiedler {f}");
        }
    }
}

#[test]
fn sampled_mode_is_a_subset_of_exhaustive() {
    let g = Graph::from_edge_list(8, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3), (6, 7)]).unwrap();
    let p = all_pairs_partition(8).unwrap();
    let full = verify_bound(&g, &p, &VerifyOptions::default()).unwrap();
    let sampled = sample_cuts_verify(&g, &p, BoundSpec::BASE, Tolerances::default(), 500, 4).unwrap();
    assert!(matches!(sampled.mode, CutMode::Sampled { trials: 500, seed: 4 }));
    assert_eq!(sampled.cuts_examined, 500);
    let full_cuts: std::collections::HashSet<_> = cut_rows(&g, &p, &VerifyOptions::default())
        .unwrap()
        .unwrap()
        .into_iter()
        .filter(|r| !r.pass)
        .map(|r| r.cut)
        .collect();
    for v in &sampled.violations {
        assert!(full_cuts.contains(&v.cut));
    }
    assert!(sampled.worst_ratio.unwrap() >= full.worst_ratio.unwrap() - 1e-12);
}

#[test]
fn sampling_scales_past_the_exhaustive_cap() {
    let p = affine_plane(7).unwrap();
    let g = design_graph(&p, BlockPattern::StarAtFirst);
    assert!(verify_bound(&g, &p, &VerifyOptions::default()).is_err());
    let opts = VerifyOptions {
        mode: CutMode::Sampled { trials: 300, seed: 1 },
        jobs: 3,
        ..VerifyOptions::default()
    };
    let r = verify_bound(&g, &p, &opts).unwrap();
    assert!(r.holds());
    let again = verify_bound(&g, &p, &VerifyOptions { jobs: 1, ..opts }).unwrap();
    assert_eq!(r, again);
    // cut labels switch to hex above 64 vertices
    let big = affine_plane(11).unwrap();
    let g = design_graph(&big, BlockPattern::Complete);
    let r = verify_bound(&g, &big, &VerifyOptions { mode: CutMode::Sampled { trials: 5, seed: 2 }, ..opts }).unwrap();
    assert!(r.worst_cut.unwrap().starts_with("0x"));
}

#[test]
fn report_serializes_to_one_json_line() {
    let r = verify_bound(&complete(5), &near_pencil(5).unwrap(), &VerifyOptions::default()).unwrap();
    let line = serde_json::to_string(&r).unwrap();
    assert!(!line.contains('\n'));
    let value: serde_json::Value = serde_json::from_str(&line).unwrap();
    assert_eq!(value["status"], "checked");
    assert_eq!(value["cuts_examined"], 15);
    assert!(value["violations"].as_array().unwrap().is_empty());
}
