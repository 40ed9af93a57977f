//! `cutcert`: certify smallness, audit block partitions, and check cut bounds.
//!
//! Exit codes: 0 success, 1 numerical failure, 2 input error, 3 negative
//! finding (not small, invalid partition, violated bound), 4 bound inapplicable.

mod config;
mod error;
mod render;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cutcert_core::analyzer::{cut_label, cut_rows, enumerate_cuts, fiedler_value, sparsity_profile, verify_bound};
use cutcert_core::bounds::identity_suite;
use cutcert_core::partition::validate;
use cutcert_core::smallness::{minimal_c, Tolerances, DEFAULT_TOL_C};
use cutcert_core::{BoundKind, RefinedVariant, VertexSet};

use config::{analyzer_error, smallness_error, Format, PartitionSource, Resolved, RunConfig};
use error::{CliError, Outcome};

#[derive(Parser)]
#[command(name = "cutcert", version, about = "Smallness certificates and edge-cut lower bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
struct GraphArgs {
    /// Edge-list file: header `n m`, then `m` lines `u v`.
    #[arg(long, value_name = "PATH")]
    graph: Option<PathBuf>,
    /// Generator, e.g. `star:5`, `multipartite:3,3,3`, `gnp:10,0.5,42`.
    #[arg(long = "gen", value_name = "SPEC")]
    generator: Option<String>,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Bisection width on c.
    #[arg(long, default_value_t = DEFAULT_TOL_C)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CutModeArg {
    Exhaustive,
    Sample,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportMode {
    Identities,
    Sparsity,
    Fiedler,
}

#[derive(Subcommand)]
enum Command {
    /// Smallest c for which the graph is c-small.
    Certify {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Audit a block family as a pairwise partition of 0..n.
    Validate {
        /// Blocks file, or one of trivial, all-pairs, near-pencil, affine:q.
        #[arg(long, value_name = "SOURCE")]
        partition: String,
        /// Ground-set size.
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
    /// Check the cut bound against every (or a sample of) cut.
    Verify {
        #[command(flatten)]
        graph: GraphArgs,
        /// Blocks file, or one of trivial, all-pairs, near-pencil, affine:q.
        #[arg(long, value_name = "SOURCE")]
        partition: String,
        #[arg(long, default_value = "base")]
        bound: BoundKind,
        #[arg(long, default_value = "as-stated")]
        variant: RefinedVariant,
        #[arg(long, value_enum, default_value_t = CutModeArg::Exhaustive)]
        mode: CutModeArg,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads for cut evaluation; output does not depend on it.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Identity residuals, exact sparsity, or the Fiedler value.
    Report {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_enum)]
        mode: ReportMode,
        /// Identities over every cut instead of a single `--cut`.
        #[arg(long)]
        all_cuts: bool,
        /// Cut bitmask (bit i set = vertex i in S) for identities mode.
        #[arg(long, default_value_t = 1, conflicts_with = "all_cuts")]
        cut: u64,
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn config(graph: GraphArgs, common: &CommonArgs) -> Result<RunConfig, CliError> {
    Ok(RunConfig {
        graph: RunConfig::graph_source(graph.graph, graph.generator)?,
        partition: None,
        tolerances: Tolerances {
            tol_c: common.tol,
            ..Tolerances::default()
        },
        seed: 0,
        trials: 0,
        bound: BoundKind::Base,
        variant: RefinedVariant::AsStated,
        sampled: false,
        jobs: 1,
        format: common.format,
    })
}

fn run(cli: Cli) -> Result<(String, Outcome), CliError> {
    match cli.command {
        Command::Certify { graph, common } => {
            let cfg = config(graph, &common)?;
            let g = cfg.load_graph()?;
            let cert = minimal_c(&g, cfg.tolerances).map_err(smallness_error)?;
            Ok(render::certify(&g, &cert, cfg.format))
        }
        Command::Validate { partition, n, format } => {
            let blocks = match PartitionSource::parse(&partition)? {
                PartitionSource::File(path) => config::read_blocks(&path)?,
                named => match named.resolve(n)? {
                    Resolved::Valid(p) => p.blocks().to_vec(),
                    Resolved::Invalid(_) => unreachable!("only files can be invalid"),
                },
            };
            let report = validate(n, &blocks).map_err(|e| CliError::Input(e.to_string()))?;
            Ok(render::validate(n, &blocks, &report, format))
        }
        Command::Verify {
            graph,
            partition,
            bound,
            variant,
            mode,
            trials,
            seed,
            jobs,
            common,
        } => {
            let cfg = RunConfig {
                partition: Some(PartitionSource::parse(&partition)?),
                bound,
                variant,
                sampled: mode == CutModeArg::Sample,
                trials,
                seed,
                jobs,
                ..config(graph, &common)?
            };
            let g = cfg.load_graph()?;
            let p = match cfg.partition.as_ref().expect("set above").resolve(g.n())? {
                Resolved::Valid(p) => p,
                Resolved::Invalid(summary) => {
                    return Ok((format!("invalid partition: {summary}\n"), Outcome::Negative));
                }
            };
            let options = cfg.verify_options();
            if cfg.format == Format::Csv {
                let rows = cut_rows(&g, &p, &options).map_err(analyzer_error)?;
                return Ok(render::verify_rows(rows.as_deref()));
            }
            let report = verify_bound(&g, &p, &options).map_err(analyzer_error)?;
            Ok(render::verify(&report, cfg.format))
        }
        Command::Report {
            graph,
            mode,
            all_cuts,
            cut,
            common,
        } => {
            let cfg = config(graph, &common)?;
            let g = cfg.load_graph()?;
            match mode {
                ReportMode::Identities => {
                    let masks: Vec<u64> = if all_cuts {
                        enumerate_cuts(g.n()).map_err(analyzer_error)?.collect()
                    } else {
                        vec![cut]
                    };
                    let mut reports = Vec::with_capacity(masks.len());
                    for mask in masks {
                        if g.n() > 64 || (g.n() < 64 && mask >> g.n() != 0) {
                            return Err(CliError::Input(format!("cut {mask} has bits outside 0..{}", g.n())));
                        }
                        let set = VertexSet::from_mask(g.n(), mask);
                        let mut r = identity_suite(&g, &set).map_err(|e| CliError::Input(e.to_string()))?;
                        r.cut = cut_label(&set);
                        reports.push(r);
                    }
                    Ok(render::identities(&reports, cfg.format))
                }
                ReportMode::Sparsity => {
                    let profile = sparsity_profile(&g).map_err(analyzer_error)?;
                    Ok(render::sparsity(&profile, cfg.format))
                }
                ReportMode::Fiedler => {
                    let value = fiedler_value(&g).map_err(analyzer_error)?;
                    Ok(render::fiedler(value, cfg.format))
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((text, outcome)) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(text.as_bytes()).and_then(|()| out.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::from(outcome.code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
