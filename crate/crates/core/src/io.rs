//! Text formats.
//!
//! Edge list: the first non-comment line is `n m`, followed by `m` lines
//! `u v` with 0-indexed endpoints. Blocks: one block per line as
//! whitespace-separated vertex ids. In both, lines starting with `#` and
//! blank lines are skipped.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{Graph, GraphError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing header line `n m`")]
    MissingHeader,
    #[error("header announces {expected} edges, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_ids(line: usize, text: &str) -> Result<Vec<usize>, ParseError> {
    text.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>().map_err(|_| ParseError::Syntax {
                line,
                message: format!("`{tok}` is not a vertex id"),
            })
        })
        .collect()
}

pub fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut lines = content_lines(text);
    let (header_line, header) = lines.next().ok_or(ParseError::MissingHeader)?;
    let nm = parse_ids(header_line, header)?;
    let [n, m] = nm[..] else {
        return Err(ParseError::Syntax {
            line: header_line,
            message: "header must be `n m`".into(),
        });
    };

    let mut pairs = Vec::with_capacity(m);
    for (line, text) in lines {
        let ids = parse_ids(line, text)?;
        let [u, v] = ids[..] else {
            return Err(ParseError::Syntax {
                line,
                message: "edge line must be `u v`".into(),
            });
        };
        if u >= n || v >= n {
            return Err(ParseError::Graph {
                line,
                source: GraphError::EndpointOutOfRange(u, v, n),
            });
        }
        if u == v {
            return Err(ParseError::Graph {
                line,
                source: GraphError::SelfLoop(u),
            });
        }
        pairs.push((u, v));
    }
    if pairs.len() != m {
        return Err(ParseError::EdgeCount {
            expected: m,
            found: pairs.len(),
        });
    }
    Graph::from_edge_list(n, &pairs).map_err(|source| ParseError::Graph { line: header_line, source })
}

pub fn write_edge_list(graph: &Graph) -> String {
    let mut out = format!("{} {}\n", graph.n(), graph.edge_count());
    for &(u, v) in graph.edges() {
        writeln!(out, "{u} {v}").expect("writing to a String");
    }
    out
}

/// Raw blocks; range and pair conditions are checked by `partition::validate`.
pub fn parse_blocks(text: &str) -> Result<Vec<Vec<usize>>, ParseError> {
    content_lines(text).map(|(line, l)| parse_ids(line, l)).collect()
}

pub fn write_blocks(blocks: &[Vec<usize>]) -> String {
    let mut out = String::new();
    for b in blocks {
        let ids: Vec<String> = b.iter().map(usize::to_string).collect();
        writeln!(out, "{}", ids.join(" ")).expect("writing to a String");
    }
    out
}
