//! Certificates and checks for edge-cut lower bounds on graphs whose vertex
//! pairs are partitioned into `c`-small blocks.
//!
//! A graph with adjacency matrix `M` is `c`-small when `cJ − M` is positive
//! semidefinite. If every pair of vertices lies in exactly one block of a
//! family of blocks (each of size at least two) and every block induces a
//! `c`-small subgraph, the crossing count of a cut is bounded below by
//! `λ(c)·min(e(S), e(S^c))` with `λ(c) = 2(1 − c)/(1 + c)`, provided every
//! vertex has at least as many incident edges as blocks through it.
//!
//! * [`linalg`]: dense symmetric matrices, Jacobi eigensolver, PSD tests.
//! * [`graph`]: graphs, cuts and generators.
//! * [`smallness`]: minimal `c` certificates.
//! * [`partition`]: pairwise partitions and their certificates.
//! * [`bounds`]: `λ(c)`, the refined bound and identity checks.
//! * [`analyzer`]: exhaustive and sampled verification against real cuts.
//! * [`io`]: edge-list and block file formats.

pub mod analyzer;
pub mod bounds;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod partition;
pub mod smallness;

pub use analyzer::{
    cut_rows, enumerate_cuts, fiedler_value, sample_cuts_verify, sparsity_profile, verify_bound, AnalyzerError,
    BoundKind, BoundSpec, CutMode, CutRow, SparsityProfile, VerificationReport, VerificationStatus, VerifyOptions,
};
pub use bounds::{
    case_threshold, f_minimizer_location, identity_suite, intermediate_bound, lambda, refined_bound, BoundError,
    BoundParameters, MinimizerLocation, RefinedVariant,
};
pub use graph::{BlockPattern, Cut, CutStats, Graph, GraphError, VertexSet};
pub use linalg::{EigenResult, LinalgError, SymmetricMatrix};
pub use partition::{
    PairPartition, PartitionCertificate, PartitionError, PartitionValidationReport,
};
pub use smallness::{is_c_small, minimal_c, SmallnessCertificate, SmallnessError, Tolerances, Verdict};
