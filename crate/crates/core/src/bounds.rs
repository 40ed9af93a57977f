//! Cut lower bounds for graphs with a `c`-small pairwise partition, and
//! numerical checks of the quadratic-form identities they rest on.
//!
//! Notation: a proper cut `S` has `p = |S|/n`, `q = 1 − p`, and the signed
//! vector `x` with `x_v = q` on `S` and `x_v = −p` off `S`. `e` is the smaller
//! of the two inside edge counts.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Cut, Graph, GraphError, VertexSet};
use crate::linalg::{quadratic_form, LinalgError};
use crate::partition::{PairPartition, PartitionError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundError {
    #[error("c = {0} outside [0, 1); the cut bound is vacuous")]
    CoefficientOutOfRange(f64),
    #[error("c = {0} must lie strictly between 0 and 1")]
    CoefficientNotInterior(f64),
    #[error("cut fraction p = {0} must lie strictly between 0 and 1")]
    FractionOutOfRange(f64),
    #[error("edge count e = {0} must be finite and nonnegative")]
    InvalidEdgeCount(f64),
    #[error("vertex count must be at least 1")]
    NoVertices,
    #[error("nonpositive denominator {0}")]
    Degenerate(f64),
    #[error("trivial cut (S empty or all of V)")]
    TrivialCut,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

/// `λ(c) = 2(1 − c)/(1 + c)` for `0 <= c < 1`.
pub fn lambda(c: f64) -> Result<f64, BoundError> {
    if !(0.0..1.0).contains(&c) {
        return Err(BoundError::CoefficientOutOfRange(c));
    }
    Ok(2.0 * (1.0 - c) / (1.0 + c))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundParameters {
    pub c: f64,
    pub e: f64,
    pub n: f64,
    pub p: f64,
}

/// The `p`-dependent lower bound on the crossing count:
///
/// ```text
/// f(p) = [2(1−c)(1−2p+2p²)·e + c(p−p²)·n] / [c + 2(1−c)(p−p²)]
/// ```
pub fn intermediate_bound(params: BoundParameters) -> Result<f64, BoundError> {
    let BoundParameters { c, e, n, p } = params;
    if !(0.0..1.0).contains(&c) {
        return Err(BoundError::CoefficientOutOfRange(c));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(BoundError::FractionOutOfRange(p));
    }
    if !(e >= 0.0 && e.is_finite()) {
        return Err(BoundError::InvalidEdgeCount(e));
    }
    let pq = p - p * p;
    let denom = c + 2.0 * (1.0 - c) * pq;
    if denom <= 0.0 {
        return Err(BoundError::Degenerate(denom));
    }
    Ok((2.0 * (1.0 - c) * (1.0 - 2.0 * p + 2.0 * p * p) * e + c * pq * n) / denom)
}

fn check_interior(c: f64) -> Result<(), BoundError> {
    if c > 0.0 && c < 1.0 {
        Ok(())
    } else {
        Err(BoundError::CoefficientNotInterior(c))
    }
}

/// `c²n / (4(1 − c))`, where the minimiser of `f` switches between `p = 1/2`
/// and the endpoints.
pub fn case_threshold(c: f64, n: f64) -> Result<f64, BoundError> {
    check_interior(c)?;
    Ok(c * c * n / (4.0 * (1.0 - c)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RefinedVariant {
    /// Additive term `c·n/4` on the upper branch.
    #[default]
    AsStated,
    /// Additive term `c·n/(2(1+c))`, the exact value of `f(1/2)`.
    Tight,
}

impl std::str::FromStr for RefinedVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "as-stated" => Ok(Self::AsStated),
            "tight" => Ok(Self::Tight),
            other => Err(format!("unknown bound variant `{other}` (expected as-stated or tight)")),
        }
    }
}

impl std::fmt::Display for RefinedVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::AsStated => "as-stated",
            Self::Tight => "tight",
        })
    }
}

/// Piecewise bound without the `p` dependence:
/// `λ(c)·e + extra` when `e` exceeds [`case_threshold`], else `2(1−c)/c · e`.
pub fn refined_bound(c: f64, e: f64, n: f64, variant: RefinedVariant) -> Result<f64, BoundError> {
    check_interior(c)?;
    if !(e >= 0.0 && e.is_finite()) {
        return Err(BoundError::InvalidEdgeCount(e));
    }
    if n < 1.0 {
        return Err(BoundError::NoVertices);
    }
    if e > case_threshold(c, n)? {
        let extra = match variant {
            RefinedVariant::AsStated => c * n / 4.0,
            RefinedVariant::Tight => c * n / (2.0 * (1.0 + c)),
        };
        Ok(lambda(c)? * e + extra)
    } else {
        Ok(2.0 * (1.0 - c) / c * e)
    }
}

/// Where `f(p)` attains its infimum over `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MinimizerLocation {
    /// At `p = 1/2`.
    Interior,
    /// In the limit `p → 0` (equivalently `p → 1`).
    Endpoints,
    /// `f` is constant.
    Flat,
}

/// Sign rule `df/dp ∝ (2p − 1)(4(1−c)e − c²n)`.
pub fn f_minimizer_location(c: f64, e: f64, n: f64) -> Result<MinimizerLocation, BoundError> {
    check_interior(c)?;
    let factor = 4.0 * (1.0 - c) * e - c * c * n;
    Ok(if factor > 0.0 {
        MinimizerLocation::Interior
    } else if factor < 0.0 {
        MinimizerLocation::Endpoints
    } else {
        MinimizerLocation::Flat
    })
}

/// `inf_{0<p<1} f(p)` from the sign rule.
pub fn f_infimum(c: f64, e: f64, n: f64) -> Result<f64, BoundError> {
    match f_minimizer_location(c, e, n)? {
        MinimizerLocation::Interior => intermediate_bound(BoundParameters { c, e, n, p: 0.5 }),
        MinimizerLocation::Endpoints | MinimizerLocation::Flat => Ok(2.0 * (1.0 - c) / c * e),
    }
}

/// Both sides of one identity and their absolute difference.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityResidual {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

impl IdentityResidual {
    fn new(name: &'static str, lhs: f64, rhs: f64) -> Self {
        Self {
            name,
            lhs,
            rhs,
            residual: (lhs - rhs).abs(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub cut: String,
    pub p: f64,
    pub identities: Vec<IdentityResidual>,
}

impl IdentityReport {
    pub fn max_residual(&self) -> f64 {
        self.identities.iter().map(|r| r.residual).fold(0.0, f64::max)
    }
}

/// Names of the identities reported by [`identity_suite`], in order.
pub const IDENTITY_NAMES: [&str; 6] = [
    "crossing = x'Lx",
    "x'Lx = sum d x^2 - x'Ax",
    "sum_{i<j} x_i x_j = -pqn/2",
    "sum_S d = 2e(S) + crossing",
    "sum_Sc d = 2e(Sc) + crossing",
    "sum d x^2 = 2q^2 e(S) + 2p^2 e(Sc) + (p^2+q^2) crossing",
];

/// Evaluates both sides of each identity linking cut counts to the
/// quadratic forms of the signed cut vector.
pub fn identity_suite(graph: &Graph, s: &VertexSet) -> Result<IdentityReport, BoundError> {
    let stats = graph.cut_stats(s)?;
    let cut = Cut::new(s.clone());
    if !cut.is_proper() {
        return Err(BoundError::TrivialCut);
    }
    let (p, q) = (cut.p(), cut.q());
    let n = graph.n() as f64;
    let x = cut.vector();
    let degrees = graph.degrees();

    let lap_form = quadratic_form(&graph.laplacian_matrix(), &x)?;
    let adj_form = quadratic_form(&graph.adjacency_matrix(), &x)?;
    let weighted: f64 = degrees.iter().zip(&x).map(|(&d, xv)| d as f64 * xv * xv).sum();

    let mut pair_sum = 0.0;
    for i in 0..x.len() {
        for j in (i + 1)..x.len() {
            pair_sum += x[i] * x[j];
        }
    }

    let deg_in: usize = s.iter().map(|v| degrees[v]).sum();
    let deg_out: usize = s.complement().iter().map(|v| degrees[v]).sum();
    let (e_in, e_out, crossing) = (stats.e_in as f64, stats.e_out as f64, stats.crossing as f64);

    let identities = vec![
        IdentityResidual::new(IDENTITY_NAMES[0], crossing, lap_form),
        IdentityResidual::new(IDENTITY_NAMES[1], lap_form, weighted - adj_form),
        IdentityResidual::new(IDENTITY_NAMES[2], pair_sum, -0.5 * p * q * n),
        IdentityResidual::new(IDENTITY_NAMES[3], deg_in as f64, 2.0 * e_in + crossing),
        IdentityResidual::new(IDENTITY_NAMES[4], deg_out as f64, 2.0 * e_out + crossing),
        IdentityResidual::new(
            IDENTITY_NAMES[5],
            weighted,
            2.0 * q * q * e_in + 2.0 * p * p * e_out + (p * p + q * q) * crossing,
        ),
    ];
    Ok(IdentityReport {
        cut: s.to_hex(),
        p,
        identities,
    })
}

/// Largest entry of `|A − Σ_i M_i|`, where `M_i` is the adjacency of
/// `G[A_i]` embedded back into `V`.
pub fn block_decomposition_residual(graph: &Graph, partition: &PairPartition) -> Result<f64, BoundError> {
    if graph.n() != partition.n() {
        return Err(PartitionError::SizeMismatch {
            partition: partition.n(),
            graph: graph.n(),
        }
        .into());
    }
    let mut sum = crate::linalg::SymmetricMatrix::zeros(graph.n());
    for block in partition.blocks() {
        let sub = graph.induced_subgraph(block)?;
        for &(u, v) in sub.edges() {
            sum.add_to(block[u], block[v], 1.0);
        }
    }
    let a = graph.adjacency_matrix();
    let mut worst: f64 = 0.0;
    for i in 0..graph.n() {
        for j in 0..graph.n() {
            worst = worst.max((a.get(i, j) - sum.get(i, j)).abs());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, path};
    use crate::partition::{all_pairs_partition, near_pencil};

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12
    }

    #[test]
    fn lambda_examples() {
        assert!(close(lambda(0.5).unwrap(), 2.0 / 3.0));
        assert_eq!(lambda(0.0).unwrap(), 2.0);
        assert!(close(lambda(0.75).unwrap(), 2.0 / 7.0));
        assert!(lambda(1.0).is_err());
        assert!(lambda(-0.1).is_err());
    }

    #[test]
    fn intermediate_examples() {
        let f = |c, e, n, p| intermediate_bound(BoundParameters { c, e, n, p }).unwrap();
        assert!(close(f(0.5, 3.0, 6.0, 0.5), 3.0));
        // (0 + 0.5·0.1875·4) / (0.5 + 0.1875)
        assert!((f(0.5, 0.0, 4.0, 0.25) - 0.375 / 0.6875).abs() < 1e-12);
        assert!((f(0.5, 0.0, 4.0, 0.25) - 0.5455).abs() < 1e-4);
        for c in [0.1, 0.3, 0.9] {
            let (e, n) = (4.0, 10.0);
            let at_half = (2.0 * (1.0 - c) * e + c * n / 2.0) / (1.0 + c);
            assert!(close(f(c, e, n, 0.5), at_half));
        }
        assert!(intermediate_bound(BoundParameters { c: 0.5, e: 1.0, n: 4.0, p: 0.0 }).is_err());
        assert!(intermediate_bound(BoundParameters { c: 1.0, e: 1.0, n: 4.0, p: 0.5 }).is_err());
    }

    #[test]
    fn threshold_examples() {
        assert!(close(case_threshold(0.5, 12.0).unwrap(), 1.5));
        assert_eq!(case_threshold(0.5, 0.0).unwrap(), 0.0);
        assert!(close(case_threshold(2.0 / 3.0, 9.0).unwrap(), 3.0));
        assert!(case_threshold(0.0, 3.0).is_err());
        assert!(case_threshold(1.0, 3.0).is_err());
    }

    #[test]
    fn refined_examples() {
        use RefinedVariant::*;
        assert!(close(refined_bound(0.5, 3.0, 12.0, AsStated).unwrap(), 3.5));
        assert!(close(refined_bound(0.5, 1.0, 12.0, AsStated).unwrap(), 2.0));
        assert!(close(refined_bound(0.5, 1.0, 12.0, Tight).unwrap(), 2.0));
        assert!(close(refined_bound(0.5, 3.0, 12.0, Tight).unwrap(), 4.0));
        // tie at the threshold takes the lower branch
        assert!(close(refined_bound(0.5, 1.5, 12.0, AsStated).unwrap(), 3.0));
        assert!(refined_bound(0.0, 1.0, 12.0, AsStated).is_err());
        assert!(refined_bound(0.5, -1.0, 12.0, AsStated).is_err());
        assert!(refined_bound(0.5, 1.0, 0.0, AsStated).is_err());
    }

    #[test]
    fn minimizer_examples() {
        use MinimizerLocation::*;
        assert_eq!(f_minimizer_location(0.5, 3.0, 12.0).unwrap(), Interior);
        assert_eq!(f_minimizer_location(0.5, 0.0, 12.0).unwrap(), Endpoints);
        assert_eq!(f_minimizer_location(0.8, 1.0, 100.0).unwrap(), Endpoints);
        assert_eq!(f_minimizer_location(0.5, 1.5, 12.0).unwrap(), Flat);
    }

    #[test]
    fn identity_examples() {
        let r = identity_suite(&path(4), &VertexSet::from_vertices(4, [0]).unwrap()).unwrap();
        let pairs = &r.identities[2];
        assert!((pairs.lhs + 0.375).abs() < 1e-15);
        assert!(r.max_residual() <= 1e-12);

        let r = identity_suite(&complete(4), &VertexSet::from_vertices(4, [0, 1]).unwrap()).unwrap();
        assert!(close(r.identities[0].rhs, 4.0));

        assert!(matches!(
            identity_suite(&complete(3), &VertexSet::empty(3)),
            Err(BoundError::TrivialCut)
        ));
        assert!(matches!(
            identity_suite(&complete(3), &VertexSet::full(3)),
            Err(BoundError::TrivialCut)
        ));
    }

    #[test]
    fn decomposition_is_exact() {
        assert_eq!(block_decomposition_residual(&complete(5), &near_pencil(5).unwrap()).unwrap(), 0.0);
        assert_eq!(
            block_decomposition_residual(&path(6), &all_pairs_partition(6).unwrap()).unwrap(),
            0.0
        );
    }
}
