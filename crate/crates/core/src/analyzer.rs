//! Checks the cut bounds against actual cuts, exhaustively or by sampling.
//!
//! Cuts are unordered splits `{S, S^c}`; the canonical representative is the
//! side containing vertex 0, and the trivial split `S = V` is never examined.
//! For `n <= 64` cuts are labelled by their decimal bitmask, otherwise by hex.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{lambda, refined_bound, BoundError, RefinedVariant};
use crate::graph::{CutStats, Graph, GraphError, VertexSet};
use crate::linalg::{eigen_all, LinalgError, JACOBI_REL_TOL};
use crate::partition::{
    partition_certificate, replication_degree_check, CertificateError, PairPartition, PartitionCertificate,
    PartitionError,
};
use crate::smallness::Tolerances;

/// Largest `n` for which cuts are enumerated exhaustively.
pub const EXHAUSTIVE_CAP: usize = 26;

/// Absolute slack on `crossing − bound` before a cut counts as a violation.
pub const VIOLATION_TOL: f64 = 1e-9;

/// Default number of violations kept in a report; the count is always exact.
pub const DEFAULT_VIOLATION_LIMIT: usize = 1000;

#[derive(Debug, Error)]
pub enum AnalyzerError {
    #[error("n = {n} exceeds the exhaustive cap of {EXHAUSTIVE_CAP} vertices; use sampling")]
    ExhaustiveCap { n: usize },
    #[error("need at least one trial")]
    NoTrials,
    #[error("sampling needs at least 2 vertices")]
    TooFewVertices,
    #[error(transparent)]
    Certificate(#[from] CertificateError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

/// Canonical bitmasks of all nontrivial cuts: bit 0 set, not every bit set.
/// Yields `2^(n−1) − 1` masks in increasing order.
pub fn enumerate_cuts(n: usize) -> Result<impl Iterator<Item = u64> + Clone, AnalyzerError> {
    if n > EXHAUSTIVE_CAP {
        return Err(AnalyzerError::ExhaustiveCap { n });
    }
    let count: u64 = if n == 0 { 0 } else { (1u64 << (n - 1)) - 1 };
    Ok((0..count).map(|rest| 1 | (rest << 1)))
}

pub fn cut_label(set: &VertexSet) -> String {
    match set.as_mask() {
        Some(mask) => mask.to_string(),
        None => set.to_hex(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// `λ(c)·e_min`.
    Base,
    /// The piecewise bound with the additive `n` term.
    Refined,
}

impl std::str::FromStr for BoundKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "base" => Ok(Self::Base),
            "refined" => Ok(Self::Refined),
            other => Err(format!("unknown bound `{other}` (expected base or refined)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundSpec {
    pub kind: BoundKind,
    pub variant: RefinedVariant,
}

impl BoundSpec {
    pub const BASE: BoundSpec = BoundSpec {
        kind: BoundKind::Base,
        variant: RefinedVariant::AsStated,
    };

    pub fn refined(variant: RefinedVariant) -> Self {
        Self {
            kind: BoundKind::Refined,
            variant,
        }
    }

    /// Bound on the crossing count for a cut with smaller side count `e_min`.
    pub fn value(&self, c: f64, e_min: u64, n: usize) -> Result<f64, BoundError> {
        let e = e_min as f64;
        match self.kind {
            BoundKind::Base => Ok(lambda(c)? * e),
            // c = 0 only when every block is edgeless; use the c → 0 limit 2e.
            BoundKind::Refined if c == 0.0 => Ok(2.0 * e),
            BoundKind::Refined => refined_bound(c, e, n as f64, self.variant),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CutMode {
    Exhaustive,
    Sampled { trials: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub bound: BoundSpec,
    pub tolerances: Tolerances,
    pub mode: CutMode,
    /// Worker threads; `0` or `1` evaluates on the calling thread.
    pub jobs: usize,
    pub violation_limit: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            bound: BoundSpec::BASE,
            tolerances: Tolerances::default(),
            mode: CutMode::Exhaustive,
            jobs: 1,
            violation_limit: DEFAULT_VIOLATION_LIMIT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub cut: String,
    pub e_in: u64,
    pub e_out: u64,
    pub crossing: u64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum VerificationStatus {
    Checked,
    Inapplicable { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub n: usize,
    pub edges: usize,
    pub blocks: usize,
    pub max_block_size: usize,
    pub certificate: PartitionCertificate,
    pub c: Option<f64>,
    pub lambda: Option<f64>,
    pub degree_dominance: bool,
    pub dominance_failures: Vec<usize>,
    pub bound: BoundSpec,
    pub mode: CutMode,
    #[serde(flatten)]
    pub status: VerificationStatus,
    pub cuts_examined: u64,
    /// Smallest `crossing / bound` over cuts with a positive bound.
    pub worst_ratio: Option<f64>,
    pub worst_cut: Option<String>,
    pub violation_count: u64,
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    /// Checked with no violation.
    pub fn holds(&self) -> bool {
        matches!(self.status, VerificationStatus::Checked) && self.violation_count == 0
    }

    pub fn is_applicable(&self) -> bool {
        matches!(self.status, VerificationStatus::Checked)
    }
}

/// One evaluated cut.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutRow {
    pub cut: String,
    pub e_in: u64,
    pub e_out: u64,
    pub crossing: u64,
    pub bound: f64,
    pub pass: bool,
}

impl CutRow {
    pub const CSV_HEADER: &'static str = "cut_bitmask,e_in,e_out,crossing,bound,pass";

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.cut, self.e_in, self.e_out, self.crossing, self.bound, self.pass
        )
    }
}

fn is_violation(stats: &CutStats, bound: f64) -> bool {
    (stats.crossing as f64) - bound < -VIOLATION_TOL
}

/// Running summary over cuts; merging is associative and keeps the
/// earliest cut (in canonical order) on ties.
#[derive(Debug, Default)]
struct Tally {
    examined: u64,
    worst: Option<(f64, u64)>,
    violation_count: u64,
    /// `(order, violation)`, sorted by order.
    violations: Vec<(u64, Violation)>,
}

impl Tally {
    fn record(&mut self, order: u64, label: impl FnOnce() -> String, stats: CutStats, bound: f64, limit: usize) {
        self.examined += 1;
        if bound > 0.0 {
            let ratio = stats.crossing as f64 / bound;
            if self.worst.is_none_or(|(r, _)| ratio < r) {
                self.worst = Some((ratio, order));
            }
        }
        if is_violation(&stats, bound) {
            self.violation_count += 1;
            if self.violations.len() < limit {
                self.violations.push((
                    order,
                    Violation {
                        cut: label(),
                        e_in: stats.e_in,
                        e_out: stats.e_out,
                        crossing: stats.crossing,
                        bound,
                    },
                ));
            }
        }
    }

    fn merge(mut self, other: Tally, limit: usize) -> Tally {
        self.examined += other.examined;
        self.worst = match (self.worst, other.worst) {
            (Some(a), Some(b)) => Some(if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a }),
            (a, b) => a.or(b),
        };
        self.violation_count += other.violation_count;
        self.violations.extend(other.violations);
        self.violations.sort_by_key(|(order, _)| *order);
        self.violations.truncate(limit);
        self
    }
}

/// The cuts to examine, addressed by their position in canonical order.
enum CutSource {
    Masks { n: usize },
    Sets(Vec<VertexSet>),
}

impl CutSource {
    fn len(&self) -> u64 {
        match self {
            Self::Masks { n } => {
                if *n == 0 {
                    0
                } else {
                    (1u64 << (n - 1)) - 1
                }
            }
            Self::Sets(sets) => sets.len() as u64,
        }
    }

    fn stats(&self, graph: &Graph, index: u64) -> CutStats {
        match self {
            Self::Masks { .. } => graph.cut_stats_mask(1 | (index << 1)),
            Self::Sets(sets) => graph.cut_stats(&sets[index as usize]).expect("sampled sets match the graph"),
        }
    }

    fn label(&self, index: u64) -> String {
        match self {
            Self::Masks { .. } => (1 | (index << 1)).to_string(),
            Self::Sets(sets) => cut_label(&sets[index as usize]),
        }
    }
}

/// Uniform random subsets, each replaced by its complement when it misses
/// vertex 0; the full set is redrawn.
pub fn sample_cuts(n: usize, trials: usize, seed: u64) -> Result<Vec<VertexSet>, AnalyzerError> {
    if trials == 0 {
        return Err(AnalyzerError::NoTrials);
    }
    if n < 2 {
        return Err(AnalyzerError::TooFewVertices);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(trials);
    while out.len() < trials {
        let mut s = VertexSet::empty(n);
        for v in 0..n {
            if rng.gen_bool(0.5) {
                s.insert(v);
            }
        }
        if !s.contains(0) {
            s = s.complement();
        }
        if s.len() < n {
            out.push(s);
        }
    }
    Ok(out)
}

fn cut_source(graph: &Graph, mode: CutMode) -> Result<CutSource, AnalyzerError> {
    match mode {
        CutMode::Exhaustive => {
            if graph.n() > EXHAUSTIVE_CAP {
                return Err(AnalyzerError::ExhaustiveCap { n: graph.n() });
            }
            Ok(CutSource::Masks { n: graph.n() })
        }
        CutMode::Sampled { trials, seed } => Ok(CutSource::Sets(sample_cuts(graph.n(), trials, seed)?)),
    }
}

const CHUNK: u64 = 4096;

fn run_with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T, AnalyzerError> {
    if jobs <= 1 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| AnalyzerError::ThreadPool(e.to_string()))?;
    Ok(pool.install(f))
}

fn tally_cuts(
    graph: &Graph,
    source: &CutSource,
    bound_of: impl Fn(&CutStats) -> f64 + Sync,
    jobs: usize,
    limit: usize,
) -> Result<Tally, AnalyzerError> {
    let total = source.len();
    let chunks = total.div_ceil(CHUNK);
    let eval_chunk = |k: u64| {
        let mut t = Tally::default();
        for index in (k * CHUNK)..((k + 1) * CHUNK).min(total) {
            let stats = source.stats(graph, index);
            t.record(index, || source.label(index), stats, bound_of(&stats), limit);
        }
        t
    };
    let parts: Vec<Tally> = if jobs <= 1 {
        (0..chunks).map(eval_chunk).collect()
    } else {
        run_with_jobs(jobs, || (0..chunks).into_par_iter().map(eval_chunk).collect())?
    };
    Ok(parts.into_iter().fold(Tally::default(), |acc, t| acc.merge(t, limit)))
}

/// Applicable `c`, or the reason the bound says nothing.
fn applicable_c(certificate: &PartitionCertificate, bound: BoundSpec) -> Result<f64, String> {
    match certificate {
        PartitionCertificate::NotSmallForAnyC { block, .. } => {
            Err(format!("block {block} is not c-small for any c"))
        }
        PartitionCertificate::Uniform { c, .. } if *c >= 1.0 => {
            Err(format!("certificate c = {c} >= 1 makes the bound vacuous"))
        }
        PartitionCertificate::Uniform { c, .. } => {
            // validate once so per-cut evaluation cannot fail
            bound.value(*c, 1, 1).map_err(|e| e.to_string())?;
            Ok(*c)
        }
    }
}

/// Certifies the partition, then evaluates the chosen bound on every
/// examined cut. Degree dominance is recorded but never used as a filter.
pub fn verify_bound(
    graph: &Graph,
    partition: &PairPartition,
    options: &VerifyOptions,
) -> Result<VerificationReport, AnalyzerError> {
    let dominance = replication_degree_check(graph, partition)?;
    let source = cut_source(graph, options.mode)?;
    let certificate = partition_certificate(graph, partition, options.tolerances)?;

    let mut report = VerificationReport {
        n: graph.n(),
        edges: graph.edge_count(),
        blocks: partition.block_count(),
        max_block_size: partition.max_block_size(),
        c: certificate.c(),
        lambda: certificate.c().and_then(|c| lambda(c).ok()),
        certificate,
        degree_dominance: dominance.passes,
        dominance_failures: dominance.failing_vertices,
        bound: options.bound,
        mode: options.mode,
        status: VerificationStatus::Checked,
        cuts_examined: 0,
        worst_ratio: None,
        worst_cut: None,
        violation_count: 0,
        violations: Vec::new(),
    };

    let c = match applicable_c(&report.certificate, options.bound) {
        Ok(c) => c,
        Err(reason) => {
            report.status = VerificationStatus::Inapplicable { reason };
            return Ok(report);
        }
    };

    let n = graph.n();
    let bound = options.bound;
    let tally = tally_cuts(
        graph,
        &source,
        |stats| bound.value(c, stats.e_min, n).expect("coefficient checked"),
        options.jobs,
        options.violation_limit,
    )?;

    report.cuts_examined = tally.examined;
    report.worst_ratio = tally.worst.map(|(r, _)| r);
    report.worst_cut = tally.worst.map(|(_, order)| source.label(order));
    report.violation_count = tally.violation_count;
    report.violations = tally.violations.into_iter().map(|(_, v)| v).collect();
    Ok(report)
}

/// Sampled verification; a thin wrapper over [`verify_bound`].
pub fn sample_cuts_verify(
    graph: &Graph,
    partition: &PairPartition,
    bound: BoundSpec,
    tolerances: Tolerances,
    trials: usize,
    seed: u64,
) -> Result<VerificationReport, AnalyzerError> {
    if trials == 0 {
        return Err(AnalyzerError::NoTrials);
    }
    verify_bound(
        graph,
        partition,
        &VerifyOptions {
            bound,
            tolerances,
            mode: CutMode::Sampled { trials, seed },
            ..VerifyOptions::default()
        },
    )
}

/// Per-cut rows in canonical order, for CSV export. Returns `None` when the
/// bound is inapplicable (see the report's status).
pub fn cut_rows(
    graph: &Graph,
    partition: &PairPartition,
    options: &VerifyOptions,
) -> Result<Option<Vec<CutRow>>, AnalyzerError> {
    let source = cut_source(graph, options.mode)?;
    let certificate = partition_certificate(graph, partition, options.tolerances)?;
    let Ok(c) = applicable_c(&certificate, options.bound) else {
        return Ok(None);
    };
    let rows = (0..source.len())
        .map(|index| {
            let stats = source.stats(graph, index);
            let bound = options.bound.value(c, stats.e_min, graph.n())?;
            Ok(CutRow {
                cut: source.label(index),
                e_in: stats.e_in,
                e_out: stats.e_out,
                crossing: stats.crossing,
                bound,
                pass: !is_violation(&stats, bound),
            })
        })
        .collect::<Result<Vec<_>, BoundError>>()?;
    Ok(Some(rows))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparsityProfile {
    /// `None` when no cut has `e_min > 0`.
    pub min_ratio: Option<f64>,
    pub argmin: Option<String>,
    pub cuts_examined: u64,
}

impl SparsityProfile {
    pub fn is_unbounded(&self) -> bool {
        self.min_ratio.is_none()
    }
}

/// Exact `min crossing / e_min` over cuts with `e_min > 0`: the largest
/// coefficient a bound of the form `crossing >= λ·e_min` could have here.
pub fn sparsity_profile(graph: &Graph) -> Result<SparsityProfile, AnalyzerError> {
    let mut best: Option<(f64, u64)> = None;
    let mut examined = 0;
    for mask in enumerate_cuts(graph.n())? {
        examined += 1;
        let st = graph.cut_stats_mask(mask);
        if st.e_min == 0 {
            continue;
        }
        let ratio = st.crossing as f64 / st.e_min as f64;
        if best.is_none_or(|(r, _)| ratio < r) {
            best = Some((ratio, mask));
        }
    }
    Ok(SparsityProfile {
        min_ratio: best.map(|(r, _)| r),
        argmin: best.map(|(_, m)| m.to_string()),
        cuts_examined: examined,
    })
}

/// Second-smallest Laplacian eigenvalue.
pub fn fiedler_value(graph: &Graph) -> Result<f64, AnalyzerError> {
    if graph.n() < 2 {
        return Err(AnalyzerError::TooFewVertices);
    }
    let eig = eigen_all(&graph.laplacian_matrix(), JACOBI_REL_TOL)?;
    Ok(eig.eigenvalues[1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, path, star, triangles_with_bridge};
    use crate::partition::{all_pairs_partition, near_pencil, trivial_partition};

    #[test]
    fn enumerate_examples() {
        assert_eq!(enumerate_cuts(3).unwrap().collect::<Vec<_>>(), vec![0b001, 0b011, 0b101]);
        assert_eq!(enumerate_cuts(4).unwrap().count(), 7);
        assert_eq!(enumerate_cuts(1).unwrap().count(), 0);
        assert!(matches!(enumerate_cuts(27), Err(AnalyzerError::ExhaustiveCap { n: 27 })));
    }

    #[test]
    fn verify_k5_near_pencil() {
        let r = verify_bound(&complete(5), &near_pencil(5).unwrap(), &VerifyOptions::default()).unwrap();
        assert!(r.holds());
        assert_eq!(r.cuts_examined, 15);
        assert!((r.c.unwrap() - 0.75).abs() < 1e-6);
        assert!((r.lambda.unwrap() - 2.0 / 7.0).abs() < 1e-6);
        assert!(r.worst_ratio.unwrap() >= 1.0);
        assert!(r.degree_dominance);
    }

    #[test]
    fn verify_triangles_all_pairs() {
        let g = triangles_with_bridge();
        let r = verify_bound(&g, &all_pairs_partition(6).unwrap(), &VerifyOptions::default()).unwrap();
        assert!(!r.holds());
        assert!(!r.degree_dominance);
        let tri = r.violations.iter().find(|v| v.cut == "7").expect("triangle cut {0,1,2}");
        assert_eq!((tri.e_in, tri.e_out, tri.crossing), (3, 3, 1));
        assert!((tri.bound - 2.0).abs() < 1e-6);
        assert!(r.worst_ratio.unwrap() < 1.0);
    }

    #[test]
    fn inapplicable_reports() {
        let g = Graph::from_edge_list(4, &[(0, 1), (2, 3)]).unwrap();
        let r = verify_bound(&g, &trivial_partition(4).unwrap(), &VerifyOptions::default()).unwrap();
        assert!(!r.is_applicable());
        assert_eq!(r.cuts_examined, 0);
    }

    #[test]
    fn size_mismatch_is_an_error() {
        assert!(verify_bound(&complete(4), &near_pencil(5).unwrap(), &VerifyOptions::default()).is_err());
    }

    #[test]
    fn sampled_is_deterministic() {
        let g = complete(5);
        let p = near_pencil(5).unwrap();
        let a = sample_cuts_verify(&g, &p, BoundSpec::BASE, Tolerances::default(), 100, 9).unwrap();
        let b = sample_cuts_verify(&g, &p, BoundSpec::BASE, Tolerances::default(), 100, 9).unwrap();
        assert_eq!(a, b);
        assert!(a.holds());
        assert_eq!(a.cuts_examined, 100);
        assert!(sample_cuts_verify(&g, &p, BoundSpec::BASE, Tolerances::default(), 0, 9).is_err());
    }

    #[test]
    fn parallel_matches_serial() {
        let g = triangles_with_bridge();
        let p = all_pairs_partition(6).unwrap();
        let serial = verify_bound(&g, &p, &VerifyOptions::default()).unwrap();
        let parallel = verify_bound(&g, &p, &VerifyOptions { jobs: 4, ..VerifyOptions::default() }).unwrap();
        assert_eq!(serial, parallel);
    }

    #[test]
    fn cut_rows_match_report() {
        let g = complete(5);
        let p = near_pencil(5).unwrap();
        let rows = cut_rows(&g, &p, &VerifyOptions::default()).unwrap().unwrap();
        assert_eq!(rows.len(), 15);
        assert!(rows.iter().all(|r| r.pass));
        assert_eq!(rows[0].to_csv().split(',').count(), 6);
    }

    #[test]
    fn sparsity_examples() {
        let s = sparsity_profile(&complete(4)).unwrap();
        assert_eq!(s.min_ratio, Some(4.0));
        assert_eq!(s.argmin.as_deref(), Some("3"));
        let s = sparsity_profile(&triangles_with_bridge()).unwrap();
        assert!((s.min_ratio.unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(s.argmin.as_deref(), Some("7"));
        assert!(sparsity_profile(&star(5).unwrap()).unwrap().is_unbounded());
    }

    #[test]
    fn fiedler_examples() {
        assert!((fiedler_value(&complete(4)).unwrap() - 4.0).abs() < 1e-10);
        assert!(fiedler_value(&Graph::empty(3)).unwrap().abs() < 1e-12);
        assert!((fiedler_value(&path(3)).unwrap() - 1.0).abs() < 1e-10);
        assert!(fiedler_value(&Graph::empty(1)).is_err());
    }
}
