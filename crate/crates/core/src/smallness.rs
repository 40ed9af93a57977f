//! `c`-smallness: a graph with adjacency `M` is `c`-small when `cJ − M ⪰ 0`,
//! i.e. `xᵗMx <= c (Σx)²` for every real `x`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::linalg::{
    eigen_all, hyperplane_compression, is_psd, normalized, project_to_hyperplane, quadratic_form, LinalgError,
    SymmetricMatrix, DEFAULT_PSD_TOL, JACOBI_REL_TOL,
};

/// Default bisection width on `c`.
pub const DEFAULT_TOL_C: f64 = 1e-7;

/// Upper end of the bracket search; doubling stops here.
pub const BRACKET_CAP: f64 = (1u64 << 20) as f64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SmallnessError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("no feasible c found below {cap}; input is numerically pathological")]
    BracketExceeded { cap: f64 },
    #[error("c must be finite and nonnegative, got {0}")]
    InvalidC(f64),
    #[error("tolerances must be positive and finite (tol_c = {tol_c}, tol_psd = {tol_psd})")]
    InvalidTolerances { tol_c: f64, tol_psd: f64 },
    #[error("need at least one trial")]
    NoTrials,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Bisection width on `c`.
    pub tol_c: f64,
    /// Absolute slack on eigenvalues in PSD decisions.
    pub tol_psd: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tol_c: DEFAULT_TOL_C,
            tol_psd: DEFAULT_PSD_TOL,
        }
    }
}

impl Tolerances {
    fn check(self) -> Result<Self, SmallnessError> {
        let ok = |t: f64| t > 0.0 && t.is_finite();
        if ok(self.tol_c) && ok(self.tol_psd) {
            Ok(self)
        } else {
            Err(SmallnessError::InvalidTolerances {
                tol_c: self.tol_c,
                tol_psd: self.tol_psd,
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    Small { c_min: f64 },
    /// `witness` sums to (numerically) zero and has `wᵗMw > 0`, so no `c` works.
    NotSmallForAnyC { witness: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmallnessCertificate {
    pub verdict: Verdict,
    pub tolerances: Tolerances,
}

impl SmallnessCertificate {
    pub fn c_min(&self) -> Option<f64> {
        match self.verdict {
            Verdict::Small { c_min } => Some(c_min),
            Verdict::NotSmallForAnyC { .. } => None,
        }
    }

    /// Re-checks the certificate against `graph`: feasibility at `c_min` and
    /// infeasibility at `c_min − 2·tol_c`, or the witness inequality.
    pub fn confirm(&self, graph: &Graph) -> Result<bool, SmallnessError> {
        let tol = self.tolerances;
        match &self.verdict {
            Verdict::Small { c_min } => {
                let upper = is_c_small(graph, *c_min, tol.tol_psd)?.small;
                let below = c_min - 2.0 * tol.tol_c;
                let lower = below < 0.0 || !is_c_small(graph, below, tol.tol_psd)?.small;
                Ok(upper && lower)
            }
            Verdict::NotSmallForAnyC { witness } => {
                let m = graph.adjacency_matrix();
                let sum: f64 = witness.iter().sum();
                Ok(sum.abs() <= 1e-9 && quadratic_form(&m, witness)? > tol.tol_psd)
            }
        }
    }
}

/// Outcome of [`is_c_small`]. A negative answer carries `x` with `xᵗMx > c(Σx)²`.
#[derive(Debug, Clone, PartialEq)]
pub struct SmallnessCheck {
    pub small: bool,
    pub min_eigenvalue: f64,
    pub witness: Option<Vec<f64>>,
}

/// `cJ − M`.
fn shifted(m: &SymmetricMatrix, c: f64) -> SymmetricMatrix {
    SymmetricMatrix::ones(m.order())
        .linear_combination(c, m, -1.0)
        .expect("same order")
}

/// Decides whether `cJ − M` is PSD within `tol`.
pub fn is_c_small(graph: &Graph, c: f64, tol: f64) -> Result<SmallnessCheck, SmallnessError> {
    if !(c >= 0.0 && c.is_finite()) {
        return Err(SmallnessError::InvalidC(c));
    }
    if graph.n() == 0 {
        return Ok(SmallnessCheck {
            small: true,
            min_eigenvalue: 0.0,
            witness: None,
        });
    }
    let verdict = is_psd(&shifted(&graph.adjacency_matrix(), c), tol)?;
    Ok(SmallnessCheck {
        small: verdict.psd,
        min_eigenvalue: verdict.min_eigenvalue,
        witness: verdict.witness,
    })
}

/// Minimal `c` for which `graph` is `c`-small, certified on both sides, or a
/// hyperplane witness showing that no `c` exists.
pub fn minimal_c(graph: &Graph, tolerances: Tolerances) -> Result<SmallnessCertificate, SmallnessError> {
    let tol = tolerances.check()?;
    let done = |verdict| Ok(SmallnessCertificate { verdict, tolerances: tol });

    if graph.edge_count() == 0 {
        return done(Verdict::Small { c_min: 0.0 });
    }

    // On Σx = 0 the form of cJ − M does not depend on c.
    let m = graph.adjacency_matrix();
    let compressed = hyperplane_compression(&m)?;
    let eig = eigen_all(&compressed, JACOBI_REL_TOL)?;
    let (top, v) = eig.max();
    if top > tol.tol_psd {
        let witness = normalized(&project_to_hyperplane(v));
        return done(Verdict::NotSmallForAnyC { witness });
    }

    let feasible = |c: f64| -> Result<bool, SmallnessError> { Ok(is_c_small(graph, c, tol.tol_psd)?.small) };

    let mut lo = 0.0;
    let mut hi = 1.0;
    while !feasible(hi)? {
        lo = hi;
        hi *= 2.0;
        if hi > BRACKET_CAP {
            return Err(SmallnessError::BracketExceeded { cap: BRACKET_CAP });
        }
    }
    while hi - lo > tol.tol_c {
        let mid = 0.5 * (lo + hi);
        if feasible(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    done(Verdict::Small { c_min: hi })
}

/// Closed-form certificate values for the classical families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Star,
    CompleteBipartite,
    CompleteMultipartite(usize),
}

pub fn family_c(family: Family) -> Result<f64, SmallnessError> {
    match family {
        Family::Star | Family::CompleteBipartite => Ok(0.5),
        Family::CompleteMultipartite(s) if s >= 2 => Ok((s - 1) as f64 / s as f64),
        Family::CompleteMultipartite(s) => Err(SmallnessError::InvalidC(s as f64)),
    }
}

/// `xᵗMx − c(Σx)²`; positive values violate `c`-smallness.
pub fn smallness_excess(m: &SymmetricMatrix, c: f64, x: &[f64]) -> Result<f64, SmallnessError> {
    let sum: f64 = x.iter().sum();
    Ok(quadratic_form(m, x)? - c * sum * sum)
}

/// Samples `x` uniformly from `[−1, 1]ⁿ` and returns the first one with
/// `xᵗMx > c(Σx)² + DEFAULT_PSD_TOL`.
pub fn random_vector_probe(graph: &Graph, c: f64, trials: usize, seed: u64) -> Result<Option<Vec<f64>>, SmallnessError> {
    let centre = vec![0.0; graph.n()];
    probe_around(graph, c, &centre, 1.0, trials, seed)
}

/// Like [`random_vector_probe`], sampling from the box of half-width
/// `radius` around `centre`.
pub fn probe_around(
    graph: &Graph,
    c: f64,
    centre: &[f64],
    radius: f64,
    trials: usize,
    seed: u64,
) -> Result<Option<Vec<f64>>, SmallnessError> {
    if trials == 0 {
        return Err(SmallnessError::NoTrials);
    }
    let n = graph.n();
    if centre.len() != n {
        return Err(LinalgError::DimensionMismatch {
            expected: n,
            found: centre.len(),
        }
        .into());
    }
    if n == 0 {
        return Ok(None);
    }
    let m = graph.adjacency_matrix();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = vec![0.0; n];
    for _ in 0..trials {
        for (xi, ci) in x.iter_mut().zip(centre) {
            *xi = ci + radius * rng.gen_range(-1.0..=1.0);
        }
        if smallness_excess(&m, c, &x)? > DEFAULT_PSD_TOL {
            return Ok(Some(x));
        }
    }
    Ok(None)
}
