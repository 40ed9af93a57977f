//! Output for each command in the three formats. Human output rounds to six
//! decimals; json and csv keep full precision.

use std::fmt::Write as _;

use cutcert_core::analyzer::{CutMode, CutRow, SparsityProfile, VerificationReport, VerificationStatus};
use cutcert_core::bounds::IdentityReport;
use cutcert_core::partition::{PartitionCertificate, PartitionValidationReport};
use cutcert_core::smallness::{SmallnessCertificate, Verdict};
use cutcert_core::{BoundKind, Graph};
use serde_json::json;

use crate::config::Format;
use crate::error::Outcome;

fn r6(x: f64) -> String {
    format!("{x:.6}")
}

fn vec6(xs: &[f64]) -> String {
    xs.iter().map(|&x| r6(x)).collect::<Vec<_>>().join(" ")
}

fn opt6(x: Option<f64>) -> String {
    x.map_or_else(|| "-".into(), r6)
}

fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

pub fn certify(graph: &Graph, cert: &SmallnessCertificate, format: Format) -> (String, Outcome) {
    let outcome = match cert.verdict {
        Verdict::Small { .. } => Outcome::Success,
        Verdict::NotSmallForAnyC { .. } => Outcome::Negative,
    };
    let text = match format {
        Format::Human => {
            let mut s = format!("vertices: {}\nedges: {}\n", graph.n(), graph.edge_count());
            match &cert.verdict {
                Verdict::Small { c_min } => {
                    let _ = writeln!(s, "verdict: small\nc_min: {}", r6(*c_min));
                }
                Verdict::NotSmallForAnyC { witness } => {
                    let _ = writeln!(s, "verdict: not small for any c\nwitness: {}", vec6(witness));
                }
            }
            s
        }
        Format::Json => {
            let value = json!({ "n": graph.n(), "edges": graph.edge_count(), "certificate": cert });
            format!("{value}\n")
        }
        Format::Csv => {
            let row = match &cert.verdict {
                Verdict::Small { c_min } => format!("small,{c_min},"),
                Verdict::NotSmallForAnyC { witness } => format!("not_small_for_any_c,,{}", join(witness, ";")),
            };
            format!("verdict,c_min,witness\n{row}\n")
        }
    };
    (text, outcome)
}

/// Same canonical order as the validation report's block indices.
fn canonical(blocks: &[Vec<usize>]) -> Vec<Vec<usize>> {
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

pub fn validate(n: usize, blocks: &[Vec<usize>], report: &PartitionValidationReport, format: Format) -> (String, Outcome) {
    let outcome = if report.valid { Outcome::Success } else { Outcome::Negative };
    let blocks = canonical(blocks);
    let text = match format {
        Format::Human => {
            let mut s = format!("ground set: {n}\nblocks: {}\nvalid: {}\n", blocks.len(), report.valid);
            if !report.valid {
                let _ = writeln!(s, "problems: {}", report.summary());
            }
            for &i in &report.undersized_blocks {
                let _ = writeln!(s, "  block #{i} {{{}}} has fewer than 2 vertices", join(&blocks[i], ", "));
            }
            for (u, v) in &report.uncovered_pairs {
                let _ = writeln!(s, "  pair {{{u}, {v}}} is in no block");
            }
            for ((u, v), k) in &report.multiply_covered_pairs {
                let _ = writeln!(s, "  pair {{{u}, {v}}} is in {k} blocks");
            }
            s
        }
        Format::Json => format!("{}\n", json!({ "n": n, "blocks": blocks.len(), "report": report })),
        Format::Csv => {
            let mut s = String::from("issue,item,count\n");
            for &i in &report.undersized_blocks {
                let _ = writeln!(s, "undersized_block,{},{}", join(&blocks[i], " "), blocks[i].len());
            }
            for (u, v) in &report.uncovered_pairs {
                let _ = writeln!(s, "uncovered_pair,{u} {v},0");
            }
            for ((u, v), k) in &report.multiply_covered_pairs {
                let _ = writeln!(s, "multiply_covered_pair,{u} {v},{k}");
            }
            s
        }
    };
    (text, outcome)
}

fn verify_outcome(report: &VerificationReport) -> Outcome {
    match report.status {
        VerificationStatus::Inapplicable { .. } => Outcome::Inapplicable,
        VerificationStatus::Checked if report.violation_count > 0 => Outcome::Negative,
        VerificationStatus::Checked => Outcome::Success,
    }
}

pub fn verify(report: &VerificationReport, format: Format) -> (String, Outcome) {
    let text = match format {
        Format::Json => format!("{}\n", serde_json::to_string(report).expect("report serializes")),
        Format::Csv => unreachable!("csv verification output is per cut"),
        Format::Human => {
            let mut s = format!(
                "vertices: {}\nedges: {}\nblocks: {} (largest {})\n",
                report.n, report.edges, report.blocks, report.max_block_size
            );
            match &report.certificate {
                PartitionCertificate::Uniform { c, dominant_block, .. } => {
                    let _ = writeln!(s, "certificate: c = {} (attained by block #{dominant_block})", r6(*c));
                }
                PartitionCertificate::NotSmallForAnyC { block, witness } => {
                    let _ = writeln!(s, "certificate: block #{block} is not small for any c");
                    let _ = writeln!(s, "witness: {}", vec6(witness));
                }
            }
            let _ = writeln!(s, "lambda: {}", opt6(report.lambda));
            if report.degree_dominance {
                let _ = writeln!(s, "degree dominance: holds");
            } else {
                let _ = writeln!(s, "degree dominance: fails at vertices {}", join(&report.dominance_failures, " "));
            }
            let bound = match report.bound.kind {
                BoundKind::Base => "base".to_string(),
                BoundKind::Refined => format!("refined ({})", report.bound.variant),
            };
            let _ = writeln!(s, "bound: {bound}");
            let mode = match report.mode {
                CutMode::Exhaustive => "exhaustive".to_string(),
                CutMode::Sampled { trials, seed } => format!("sampled ({trials} trials, seed {seed})"),
            };
            let _ = writeln!(s, "mode: {mode}");
            match &report.status {
                VerificationStatus::Inapplicable { reason } => {
                    let _ = writeln!(s, "status: inapplicable ({reason})");
                }
                VerificationStatus::Checked => {
                    let _ = writeln!(s, "status: checked");
                    let _ = writeln!(s, "cuts examined: {}", report.cuts_examined);
                    let worst = match (&report.worst_ratio, &report.worst_cut) {
                        (Some(r), Some(cut)) => format!("{} at cut {cut}", r6(*r)),
                        _ => "-".into(),
                    };
                    let _ = writeln!(s, "worst ratio: {worst}");
                    let _ = writeln!(s, "violations: {}", report.violation_count);
                    for v in &report.violations {
                        let _ = writeln!(
                            s,
                            "  cut {}: e_in {} e_out {} crossing {} < bound {}",
                            v.cut,
                            v.e_in,
                            v.e_out,
                            v.crossing,
                            r6(v.bound)
                        );
                    }
                    if report.violations.len() as u64 > 0 && (report.violations.len() as u64) < report.violation_count {
                        let _ = writeln!(s, "  ... {} more", report.violation_count - report.violations.len() as u64);
                    }
                }
            }
            s
        }
    };
    (text, verify_outcome(report))
}

/// `rows` is `None` when the bound does not apply.
pub fn verify_rows(rows: Option<&[CutRow]>) -> (String, Outcome) {
    let mut s = format!("{}\n", CutRow::CSV_HEADER);
    let Some(rows) = rows else {
        return (s, Outcome::Inapplicable);
    };
    for row in rows {
        s.push_str(&row.to_csv());
        s.push('\n');
    }
    let outcome = if rows.iter().all(|r| r.pass) { Outcome::Success } else { Outcome::Negative };
    (s, outcome)
}

/// Identities hold up to this absolute residual.
pub const IDENTITY_TOL: f64 = 1e-9;

pub fn identities(reports: &[IdentityReport], format: Format) -> (String, Outcome) {
    let max = reports.iter().map(IdentityReport::max_residual).fold(0.0, f64::max);
    let outcome = if max <= IDENTITY_TOL { Outcome::Success } else { Outcome::Negative };
    let text = match format {
        Format::Human => {
            let mut s = String::new();
            for r in reports {
                let _ = writeln!(s, "cut {} (p = {})", r.cut, r6(r.p));
                for id in &r.identities {
                    let _ = writeln!(
                        s,
                        "  {:<58} lhs {:>14} rhs {:>14} residual {}",
                        id.name,
                        r6(id.lhs),
                        r6(id.rhs),
                        r6(id.residual)
                    );
                }
            }
            let _ = writeln!(s, "cuts: {}\nmax residual: {max:.6e}", reports.len());
            s
        }
        Format::Json => format!("{}\n", json!({ "cuts": reports, "max_residual": max })),
        Format::Csv => {
            let mut s = String::from("cut_bitmask,p,identity,lhs,rhs,residual\n");
            for r in reports {
                for id in &r.identities {
                    let _ = writeln!(s, "{},{},\"{}\",{},{},{}", r.cut, r.p, id.name, id.lhs, id.rhs, id.residual);
                }
            }
            s
        }
    };
    (text, outcome)
}

pub fn sparsity(profile: &SparsityProfile, format: Format) -> (String, Outcome) {
    let text = match format {
        Format::Human => format!(
            "min ratio: {}\nargmin cut: {}\ncuts examined: {}\n",
            profile.min_ratio.map_or_else(|| "unbounded (no cut has edges inside both sides)".into(), r6),
            profile.argmin.as_deref().unwrap_or("-"),
            profile.cuts_examined
        ),
        Format::Json => format!("{}\n", json!({ "sparsity": profile })),
        Format::Csv => format!(
            "min_ratio,argmin,cuts_examined\n{},{},{}\n",
            profile.min_ratio.map_or_else(String::new, |r| r.to_string()),
            profile.argmin.as_deref().unwrap_or(""),
            profile.cuts_examined
        ),
    };
    (text, Outcome::Success)
}

pub fn fiedler(value: f64, format: Format) -> (String, Outcome) {
    let text = match format {
        Format::Human => format!("fiedler value: {}\n", r6(value)),
        Format::Json => format!("{}\n", json!({ "fiedler": value })),
        Format::Csv => format!("fiedler\n{value}\n"),
    };
    (text, Outcome::Success)
}
