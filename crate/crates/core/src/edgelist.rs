//! Plain-text edge lists.
//!
//! ```text
//! # vertices=4 edges=3 kind=rooted-tree(d=3,n=1)
//! # total_label=0.91234567890123456
//! 0 1
//! 0 2
//! 0 3
//! ```
//!
//! Comment lines start with `#`; `key=value` tokens in them are read as
//! header fields. `vertices=` is mandatory.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{Capacity, Graph, GraphMeta, VertexId};

#[derive(Debug, Clone)]
pub struct EdgeListFile {
    pub graph: Graph,
    pub kind: Option<String>,
    pub total_label: Option<f64>,
}

/// Fixed-point rendering with `digits` significant digits.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

pub fn render(g: &Graph, total_label: Option<f64>) -> String {
    let mut out = String::with_capacity(16 * (g.edge_count() + 2));
    writeln!(
        out,
        "# vertices={} edges={} kind={}",
        g.vertex_count(),
        g.edge_count(),
        g.descriptor()
    )
    .unwrap();
    if let Some(t) = total_label {
        writeln!(out, "# total_label={}", format_significant(t, 17)).unwrap();
    }
    for e in g.edges() {
        writeln!(out, "{} {}", e.lo(), e.hi()).unwrap();
    }
    out
}

pub fn write_file(path: &Path, g: &Graph, total_label: Option<f64>) -> Result<()> {
    std::fs::write(path, render(g, total_label)).map_err(|e| Error::io(path, e))
}

pub fn read_file(path: &Path) -> Result<EdgeListFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse(&text, path)
}

/// Parses an edge list; `origin` only labels diagnostics.
pub fn parse(text: &str, origin: &Path) -> Result<EdgeListFile> {
    let fail = |line: usize, message: String| Error::Format {
        path: origin.to_path_buf(),
        line,
        message,
    };
    let mut vertices: Option<usize> = None;
    let mut declared_edges: Option<(usize, usize)> = None;
    let mut kind = None;
    let mut total_label = None;
    let mut edges: Vec<(VertexId, VertexId)> = Vec::new();
    let mut edge_lines: Vec<usize> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            for token in comment.split_whitespace() {
                let Some((key, value)) = token.split_once('=') else {
                    continue;
                };
                match key {
                    "vertices" => {
                        let n = value
                            .parse()
                            .map_err(|_| fail(lineno, format!("bad vertex count {value:?}")))?;
                        vertices = Some(n);
                    }
                    "edges" => {
                        let m = value
                            .parse()
                            .map_err(|_| fail(lineno, format!("bad edge count {value:?}")))?;
                        declared_edges = Some((m, lineno));
                    }
                    "kind" => kind = Some(value.to_string()),
                    "total_label" => {
                        let t = value
                            .parse()
                            .map_err(|_| fail(lineno, format!("bad total label {value:?}")))?;
                        total_label = Some(t);
                    }
                    _ => {}
                }
            }
            continue;
        }
        let n = vertices.ok_or_else(|| fail(lineno, "edge before the `# vertices=` header".into()))?;
        let mut fields = line.split_whitespace();
        let (Some(a), Some(b), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(fail(lineno, format!("expected `u v`, found {line:?}")));
        };
        let parse_vertex = |s: &str| -> Result<VertexId> {
            let v: u64 = s.parse().map_err(|_| fail(lineno, format!("bad vertex id {s:?}")))?;
            if v as usize >= n {
                return Err(fail(lineno, format!("vertex {v} outside [0, {n})")));
            }
            Ok(v as VertexId)
        };
        let (a, b) = (parse_vertex(a)?, parse_vertex(b)?);
        if a == b {
            return Err(fail(lineno, format!("self-loop at vertex {a}")));
        }
        edges.push((a, b));
        edge_lines.push(lineno);
    }

    let n = vertices.ok_or_else(|| fail(1, "missing `# vertices=` header".into()))?;
    if let Some((m, line)) = declared_edges {
        if m != edges.len() {
            return Err(fail(
                line,
                format!("header declares {m} edges, file has {}", edges.len()),
            ));
        }
    }
    let mut seen: Vec<((VertexId, VertexId), usize)> = edges
        .iter()
        .zip(&edge_lines)
        .map(|(&(a, b), &l)| ((a.min(b), a.max(b)), l))
        .collect();
    seen.sort_unstable();
    if let Some(w) = seen.windows(2).find(|w| w[0].0 == w[1].0) {
        let later = w[0].1.max(w[1].1);
        return Err(fail(later, format!("duplicate edge {} {}", w[0].0 .0, w[0].0 .1)));
    }
    let meta = GraphMeta {
        descriptor: kind.clone().unwrap_or_default(),
        root: None,
        codec: None,
    };
    let graph = Graph::from_edges_with(n, edges, Capacity::default(), meta)?;
    Ok(EdgeListFile {
        graph,
        kind,
        total_label,
    })
}
