//! Plain-text edge lists.
//!
//! ```text
//! n m
//! u v      (m lines, 0 <= u < v < n, no repeats)
//! ```
//!
//! Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use corrgraph_core::graph::{Bijection, Graph, Vertex};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EdgeListError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing header line `n m`")]
    MissingHeader,
    #[error("header promises {expected} edges, found {found}")]
    EdgeCount { expected: usize, found: usize },
}

fn syntax(line: usize, message: impl Into<String>) -> EdgeListError {
    EdgeListError::Syntax {
        line,
        message: message.into(),
    }
}

fn numbers(line: usize, text: &str, want: usize) -> Result<Vec<u64>, EdgeListError> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    if fields.len() != want {
        return Err(syntax(
            line,
            format!("expected {want} integers, found {}", fields.len()),
        ));
    }
    fields
        .iter()
        .map(|f| {
            f.parse::<u64>()
                .map_err(|_| syntax(line, format!("`{f}` is not a nonnegative integer")))
        })
        .collect()
}

pub fn parse_edge_list(text: &str) -> Result<Graph, EdgeListError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or(EdgeListError::MissingHeader)?;
    let h = numbers(hline, header, 2)?;
    let n = usize::try_from(h[0]).map_err(|_| syntax(hline, "vertex count too large"))?;
    if n > Vertex::MAX as usize {
        return Err(syntax(hline, "vertex count too large"));
    }
    let m = h[1] as usize;
    let mut edges = Vec::with_capacity(m.min(1 << 20));
    let mut seen = std::collections::HashSet::new();
    for (line, text) in lines {
        let e = numbers(line, text, 2)?;
        let (u, v) = (e[0], e[1]);
        if u == v {
            return Err(syntax(line, format!("self-loop at {u}")));
        }
        if u > v {
            return Err(syntax(line, format!("edge `{u} {v}` must list the smaller end first")));
        }
        if v >= n as u64 {
            return Err(syntax(line, format!("vertex {v} out of range for n = {n}")));
        }
        let edge = (u as Vertex, v as Vertex);
        if !seen.insert(edge) {
            return Err(syntax(line, format!("duplicate edge `{u} {v}`")));
        }
        edges.push(edge);
    }
    if edges.len() != m {
        return Err(EdgeListError::EdgeCount {
            expected: m,
            found: edges.len(),
        });
    }
    Ok(Graph::from_edges(n, edges).expect("edges validated"))
}

pub fn format_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", g.n(), g.edge_count()).unwrap();
    for &(u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

pub fn read_edge_list(path: &Path) -> Result<Graph, EdgeListError> {
    let text = fs::read_to_string(path).map_err(|source| EdgeListError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_edge_list(&text)
}

pub fn write_edge_list(path: &Path, g: &Graph) -> Result<(), EdgeListError> {
    fs::write(path, format_edge_list(g)).map_err(|source| EdgeListError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// A bijection as one line of images `π(0) π(1) … π(n−1)`.
pub fn format_bijection(pi: &Bijection) -> String {
    let mut out = String::new();
    for (i, v) in pi.as_slice().iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        write!(out, "{v}").unwrap();
    }
    out.push('\n');
    out
}

/// Parses cycle notation such as `(0 1 2)(3 4)` into a permutation of
/// `0..n`. Vertices not mentioned are fixed; `()` or an empty string is the
/// identity.
pub fn parse_cycles(n: usize, text: &str) -> Result<Bijection, String> {
    let mut cycles = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let open = rest
            .strip_prefix('(')
            .ok_or_else(|| format!("expected `(` at `{rest}`"))?;
        let close = open
            .find(')')
            .ok_or_else(|| "unclosed cycle".to_string())?;
        let cycle = open[..close]
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|f| !f.is_empty())
            .map(|f| f.parse::<Vertex>().map_err(|_| format!("`{f}` is not a vertex")))
            .collect::<Result<Vec<_>, _>>()?;
        if !cycle.is_empty() {
            cycles.push(cycle);
        }
        rest = open[close + 1..].trim_start();
    }
    Bijection::from_cycles(n, &cycles).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let g = Graph::from_edges(5, [(0, 1), (1, 4), (2, 3)]).unwrap();
        assert_eq!(parse_edge_list(&format_edge_list(&g)).unwrap(), g);
    }

    #[test]
    fn cycles() {
        let s = parse_cycles(5, "(0 1 2)(3 4)").unwrap();
        assert_eq!(s.as_slice(), &[1, 2, 0, 4, 3]);
        assert_eq!(parse_cycles(3, "()").unwrap(), Bijection::identity(3));
        assert_eq!(parse_cycles(3, "").unwrap(), Bijection::identity(3));
        assert!(parse_cycles(3, "(0 1").is_err());
        assert!(parse_cycles(3, "(0 5)").is_err());
        assert!(parse_cycles(3, "0 1").is_err());
    }
}
