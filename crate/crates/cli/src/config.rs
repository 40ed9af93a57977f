//! Run configuration and resolution of graph and partition sources.

use std::path::{Path, PathBuf};

use cutcert_core::analyzer::{AnalyzerError, BoundKind, BoundSpec, CutMode, VerifyOptions};
use cutcert_core::graph::{self, BlockPattern, GraphError};
use cutcert_core::io::{parse_blocks, parse_edge_list};
use cutcert_core::partition::{self, CertificateError};
use cutcert_core::smallness::{SmallnessError, Tolerances};
use cutcert_core::{Graph, PairPartition, RefinedVariant};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GraphSource {
    File(PathBuf),
    Generator(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum PartitionSource {
    Trivial,
    AllPairs,
    NearPencil,
    Affine(usize),
    File(PathBuf),
}

impl PartitionSource {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "trivial" => Self::Trivial,
            "all-pairs" => Self::AllPairs,
            "near-pencil" => Self::NearPencil,
            _ => match s.strip_prefix("affine:") {
                Some(q) => Self::Affine(parse_num(q, "affine order")?),
                None => Self::File(PathBuf::from(s)),
            },
        })
    }

    /// Builds the partition on `0..n`. Block files that violate the pair
    /// conditions come back as [`Resolved::Invalid`].
    pub fn resolve(&self, n: usize) -> Result<Resolved, CliError> {
        let built = match self {
            Self::Trivial => partition::trivial_partition(n),
            Self::AllPairs => partition::all_pairs_partition(n),
            Self::NearPencil => partition::near_pencil(n),
            Self::Affine(q) => {
                if q * q != n {
                    return Err(CliError::Input(format!(
                        "affine:{q} has {} points, graph has {n} vertices",
                        q * q
                    )));
                }
                partition::affine_plane(*q)
            }
            Self::File(path) => {
                let blocks = read_blocks(path)?;
                // a block file implies its ground set through its largest id
                let implied = blocks.iter().flatten().max().map_or(0, |&v| v + 1);
                if implied != n {
                    return Err(CliError::Input(format!(
                        "{}: blocks span {implied} vertices, graph has {n}",
                        path.display()
                    )));
                }
                let report = partition::validate(n, &blocks).map_err(input)?;
                if !report.valid {
                    return Ok(Resolved::Invalid(report.summary()));
                }
                PairPartition::new(n, blocks)
            }
        };
        built.map(Resolved::Valid).map_err(input)
    }
}

pub enum Resolved {
    Valid(PairPartition),
    Invalid(String),
}

/// Everything one invocation needs, independent of the argument parser.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub graph: GraphSource,
    pub partition: Option<PartitionSource>,
    pub tolerances: Tolerances,
    pub seed: u64,
    pub trials: usize,
    pub bound: BoundKind,
    pub variant: RefinedVariant,
    pub sampled: bool,
    pub jobs: usize,
    pub format: Format,
}

impl RunConfig {
    /// Exactly one of `graph_file` and `generator` must be given.
    pub fn graph_source(graph_file: Option<PathBuf>, generator: Option<String>) -> Result<GraphSource, CliError> {
        match (graph_file, generator) {
            (Some(path), None) => Ok(GraphSource::File(path)),
            (None, Some(spec)) => Ok(GraphSource::Generator(spec)),
            (Some(_), Some(_)) => Err(CliError::Input("give either --graph or --gen, not both".into())),
            (None, None) => Err(CliError::Input("a graph source is required (--graph or --gen)".into())),
        }
    }

    pub fn load_graph(&self) -> Result<Graph, CliError> {
        match &self.graph {
            GraphSource::File(path) => {
                let text = read(path)?;
                parse_edge_list(&text).map_err(|source| CliError::Parse {
                    path: path.clone(),
                    source,
                })
            }
            GraphSource::Generator(spec) => generate(spec),
        }
    }

    pub fn verify_options(&self) -> VerifyOptions {
        let bound = match self.bound {
            BoundKind::Base => BoundSpec::BASE,
            BoundKind::Refined => BoundSpec::refined(self.variant),
        };
        let mode = if self.sampled {
            CutMode::Sampled {
                trials: self.trials,
                seed: self.seed,
            }
        } else {
            CutMode::Exhaustive
        };
        VerifyOptions {
            bound,
            tolerances: self.tolerances,
            mode,
            jobs: self.jobs,
            ..VerifyOptions::default()
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_blocks(path: &Path) -> Result<Vec<Vec<usize>>, CliError> {
    parse_blocks(&read(path)?).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

fn input(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

fn parse_num<T: std::str::FromStr>(s: &str, what: &str) -> Result<T, CliError> {
    s.trim()
        .parse()
        .map_err(|_| CliError::Input(format!("{what}: `{s}` is not a valid number")))
}

/// Graph generator mini-language: `name:arg,arg,...`.
///
/// `star:k`, `complete:n`, `path:n`, `cycle:n`, `empty:n`, `bipartite:a,b`,
/// `multipartite:s1,s2,...`, `gnp:n,p,seed`, `triangles-bridge`, and
/// `design:<partition>,<n or q>,<pattern>` with partition one of `trivial`,
/// `all-pairs`, `near-pencil`, `affine` and pattern one of `complete`,
/// `complete-bipartite-halves`, `star-at-first`, `empty`.
pub fn generate(spec: &str) -> Result<Graph, CliError> {
    let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let args: Vec<&str> = if rest.is_empty() { Vec::new() } else { rest.split(',').collect() };
    let arity = |k: usize| {
        if args.len() == k {
            Ok(())
        } else {
            Err(CliError::Input(format!("generator `{name}` takes {k} argument(s), got {}", args.len())))
        }
    };
    let g: Result<Graph, GraphError> = match name {
        "star" => {
            arity(1)?;
            graph::star(parse_num(args[0], "star size")?)
        }
        "complete" => {
            arity(1)?;
            Ok(graph::complete(parse_num(args[0], "vertex count")?))
        }
        "path" => {
            arity(1)?;
            Ok(graph::path(parse_num(args[0], "vertex count")?))
        }
        "cycle" => {
            arity(1)?;
            graph::cycle(parse_num(args[0], "vertex count")?)
        }
        "empty" => {
            arity(1)?;
            Ok(Graph::empty(parse_num(args[0], "vertex count")?))
        }
        "bipartite" => {
            arity(2)?;
            graph::complete_bipartite(parse_num(args[0], "side size")?, parse_num(args[1], "side size")?)
        }
        "multipartite" => {
            let sizes = args
                .iter()
                .map(|a| parse_num(a, "part size"))
                .collect::<Result<Vec<usize>, _>>()?;
            graph::complete_multipartite(&sizes)
        }
        "gnp" => {
            arity(3)?;
            graph::random_gnp(
                parse_num(args[0], "vertex count")?,
                parse_num(args[1], "edge probability")?,
                parse_num(args[2], "seed")?,
            )
        }
        "triangles-bridge" => {
            arity(0)?;
            Ok(graph::triangles_with_bridge())
        }
        "design" => {
            arity(3)?;
            let size: usize = parse_num(args[1], "design size")?;
            let source = match args[0] {
                "affine" => PartitionSource::Affine(size),
                "trivial" | "all-pairs" | "near-pencil" => PartitionSource::parse(args[0])?,
                other => return Err(CliError::Input(format!("unknown design partition `{other}`"))),
            };
            let n = if args[0] == "affine" { size * size } else { size };
            let Resolved::Valid(p) = source.resolve(n)? else {
                unreachable!("generated partitions are valid")
            };
            let pattern: BlockPattern = args[2].parse().map_err(input)?;
            Ok(graph::design_graph(&p, pattern))
        }
        other => return Err(CliError::Input(format!("unknown generator `{other}`"))),
    };
    g.map_err(input)
}

/// Maps library failures onto input errors (exit 2) or compute errors (exit 1).
pub fn analyzer_error(e: AnalyzerError) -> CliError {
    match e {
        AnalyzerError::ExhaustiveCap { .. }
        | AnalyzerError::NoTrials
        | AnalyzerError::TooFewVertices
        | AnalyzerError::Partition(_)
        | AnalyzerError::Graph(_)
        | AnalyzerError::Certificate(CertificateError::Partition(_))
        | AnalyzerError::Certificate(CertificateError::Graph(_)) => input(e),
        AnalyzerError::Certificate(CertificateError::Smallness(s)) => smallness_error(s),
        other => CliError::Compute(other.to_string()),
    }
}

pub fn smallness_error(e: SmallnessError) -> CliError {
    match e {
        SmallnessError::InvalidTolerances { .. } | SmallnessError::InvalidC(_) | SmallnessError::NoTrials => input(e),
        other => CliError::Compute(other.to_string()),
    }
}
