//! Plain-text edge lists: a header line `n m`, then `m` lines `u v`.
//! Fields are whitespace separated; blank lines are ignored.

use std::fmt::Write as _;

use thiserror::Error;

use super::{Arc, Digraph, GraphError, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("header declares {declared} arcs but {found} were found")]
    CountMismatch { declared: usize, found: usize },
    #[error("missing header line")]
    MissingHeader,
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
}

fn fields(line: usize, text: &str, want: usize) -> Result<Vec<&str>, ParseError> {
    let parts: Vec<&str> = text.split_whitespace().collect();
    if parts.len() != want {
        return Err(ParseError::Malformed {
            line,
            msg: format!("expected {want} fields, found {}", parts.len()),
        });
    }
    Ok(parts)
}

fn number<T: std::str::FromStr>(line: usize, field: &str) -> Result<T, ParseError> {
    field.parse().map_err(|_| ParseError::Malformed {
        line,
        msg: format!("`{field}` is not a non-negative integer"),
    })
}

pub fn read_edge_list(text: &str) -> Result<Digraph, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty());

    let (hline, header) = lines.next().ok_or(ParseError::MissingHeader)?;
    let h = fields(hline, header, 2)?;
    let n: usize = number(hline, h[0])?;
    let declared: usize = number(hline, h[1])?;

    let mut arcs: Vec<Arc> = Vec::with_capacity(declared.min(1 << 24));
    for (line, text) in lines {
        let f = fields(line, text, 2)?;
        let (u, v): (u64, u64) = (number(line, f[0])?, number(line, f[1])?);
        if arcs.len() == declared {
            return Err(ParseError::CountMismatch {
                declared,
                found: declared + 1,
            });
        }
        if u >= n as u64 || v >= n as u64 {
            return Err(ParseError::Graph {
                line,
                source: GraphError::EndpointOutOfRange { tail: u, head: v, n },
            });
        }
        arcs.push((u as VertexId, v as VertexId));
    }
    if arcs.len() != declared {
        return Err(ParseError::CountMismatch {
            declared,
            found: arcs.len(),
        });
    }
    Digraph::new(n, &arcs).map_err(|source| ParseError::Graph { line: hline, source })
}

/// Serializes in forward-adjacency order.
pub fn write_edge_list(g: &Digraph) -> String {
    write_arcs(g.n(), g.arcs())
}

/// Same format for an arbitrary arc list over `n` vertices (shortcut sets,
/// spanning trees).
pub fn write_arcs(n: usize, arcs: impl IntoIterator<Item = Arc>) -> String {
    let arcs: Vec<Arc> = arcs.into_iter().collect();
    let mut out = String::with_capacity(16 + arcs.len() * 12);
    let _ = writeln!(out, "{} {}", n, arcs.len());
    for (u, v) in arcs {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}
