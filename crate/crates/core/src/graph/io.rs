//! Edge-list text format.
//!
//! One `u v` pair per line, 0-indexed, each undirected edge listed once.
//! Blank lines and lines starting with `#` are ignored, except that a
//! `# n=<count>` line declares the vertex count; without it the count is
//! one past the largest index seen.

use std::collections::HashSet;
use std::fmt::Write as _;

use super::Graph;
use crate::error::{Error, Result};

pub fn load_graph(text: &str) -> Result<Graph> {
    let mut declared_n = None;
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(value) = comment.trim().strip_prefix("n=") {
                let n = value.trim().parse::<usize>().map_err(|e| Error::Parse {
                    line: line_no,
                    message: format!("bad vertex count {value:?}: {e}"),
                })?;
                declared_n = Some(n);
            }
            continue;
        }
        let mut fields = line.split_whitespace();
        let (Some(a), Some(b), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::Parse { line: line_no, message: format!("expected \"u v\", got {line:?}") });
        };
        let parse = |s: &str| {
            s.parse::<usize>().map_err(|e| Error::Parse { line: line_no, message: format!("bad vertex {s:?}: {e}") })
        };
        let (u, v) = (parse(a)?, parse(b)?);
        if u == v {
            return Err(Error::SelfLoop { line: line_no, vertex: u });
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(Error::DuplicateEdge { line: line_no, u: u.min(v), v: u.max(v) });
        }
        edges.push((u, v));
    }
    let max_index = edges.iter().map(|&(u, v)| u.max(v)).max();
    let n = match (declared_n, max_index) {
        (Some(n), Some(m)) if m >= n => return Err(Error::VertexOutOfRange { vertex: m, n }),
        (Some(n), _) => n,
        (None, Some(m)) => m + 1,
        (None, None) => return Err(Error::Parse { line: 0, message: "no edges and no vertex count".into() }),
    };
    Graph::from_edges(n, &edges)
}

pub fn save_graph(g: &Graph) -> String {
    let mut out = String::with_capacity(16 * g.edge_count() + 16);
    let _ = writeln!(out, "# n={}", g.n());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::grid_graph;

    #[test]
    fn loads_path() {
        let g = load_graph("0 1\n1 2").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.degrees(), vec![1, 2, 1]);
    }

    #[test]
    fn round_trip() {
        let g = grid_graph(2, 2).unwrap();
        assert_eq!(load_graph(&save_graph(&g)).unwrap(), g);
    }

    #[test]
    fn error_cases() {
        assert!(matches!(load_graph("0 0"), Err(Error::SelfLoop { line: 1, vertex: 0 })));
        assert!(matches!(load_graph("0 1\n1 0"), Err(Error::DuplicateEdge { line: 2, .. })));
        assert!(matches!(load_graph("0 1\nx 2"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(load_graph("0 1 2"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(load_graph("# n=2\n0 1\n1 2"), Err(Error::VertexOutOfRange { vertex: 2, n: 2 })));
        assert!(matches!(load_graph("0 1\n2 3"), Err(Error::Disconnected { .. })));
        assert!(matches!(load_graph("# n=4\n0 1\n1 2"), Err(Error::Disconnected { .. })));
    }

    #[test]
    fn ignores_comments_and_blanks() {
        let g = load_graph("# a comment\n\n0 1\n  1   2  \n").unwrap();
        assert_eq!(g.edge_count(), 2);
    }
}
