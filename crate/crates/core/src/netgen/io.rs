use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use super::graph::{DropReport, Graph};
use crate::{Error, Result};

/// A graph read from an edge list, with the mapping back to file ids.
#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: Graph,
    /// `original_ids[v]` is the id used in the file for node `v`.
    pub original_ids: Vec<u64>,
    pub report: DropReport,
    /// Whether a leading non-numeric header line was skipped.
    pub skipped_header: bool,
}

/// Ingestion summary, suitable for manifests.
#[derive(Debug, Clone, Serialize)]
pub struct LoadSummary {
    pub n: usize,
    pub edges: usize,
    pub self_loops: usize,
    pub duplicates: usize,
}

impl LoadedGraph {
    pub fn summary(&self) -> LoadSummary {
        LoadSummary {
            n: self.graph.n(),
            edges: self.graph.edge_count(),
            self_loops: self.report.self_loops,
            duplicates: self.report.duplicates,
        }
    }
}

/// Parse an edge list: one pair of non-negative integer ids per line,
/// separated by whitespace and/or a comma. Blank lines and lines starting
/// with `#` are ignored, and so is a first data line made of two
/// non-numeric tokens (a CSV header such as `node_1,node_2`).
///
/// Ids are relabeled to `0..n` in ascending order of the original id.
pub fn parse_edge_list(text: &str) -> Result<LoadedGraph> {
    let mut pairs: Vec<(u64, u64)> = Vec::new();
    let mut seen_data = false;
    let mut skipped_header = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .collect();
        if tokens.len() != 2 {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected two node ids, found {} fields", tokens.len()),
            });
        }
        let parsed: Vec<std::result::Result<u64, _>> = tokens.iter().map(|t| t.parse::<u64>()).collect();
        match (&parsed[0], &parsed[1]) {
            (Ok(a), Ok(b)) => pairs.push((*a, *b)),
            (Err(_), Err(_)) if !seen_data && !skipped_header => {
                skipped_header = true;
                continue;
            }
            _ => {
                let bad = tokens
                    .iter()
                    .zip(&parsed)
                    .find(|(_, p)| p.is_err())
                    .map(|(t, _)| *t)
                    .unwrap_or_default();
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("invalid node id {bad:?}"),
                });
            }
        }
        seen_data = true;
    }
    let mut ids: Vec<u64> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    ids.sort_unstable();
    ids.dedup();
    if ids.len() > u32::MAX as usize {
        return Err(Error::param("edge list has more nodes than supported"));
    }
    let index = |x: u64| ids.binary_search(&x).expect("id collected above") as u32;
    let mapped: Vec<(u32, u32)> = pairs.iter().map(|&(a, b)| (index(a), index(b))).collect();
    let (graph, report) = Graph::from_edges(ids.len(), mapped)?;
    Ok(LoadedGraph {
        graph,
        original_ids: ids,
        report,
        skipped_header,
    })
}

pub fn load_edge_list(path: impl AsRef<Path>) -> Result<LoadedGraph> {
    let text = fs::read_to_string(path)?;
    parse_edge_list(&text)
}

/// Serialize as `a b` lines (each edge once, `a < b`, sorted), preceded by
/// a comment with the node and edge counts. Isolated nodes are not
/// representable and are lost on reload.
pub fn format_edge_list(g: &Graph) -> String {
    let mut out = String::with_capacity(g.edge_count() * 12 + 32);
    let _ = writeln!(out, "# nodes {} edges {}", g.n(), g.edge_count());
    for (a, b) in g.edges() {
        let _ = writeln!(out, "{a} {b}");
    }
    out
}

pub fn write_edge_list(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_edge_list(g))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_list() {
        let lg = parse_edge_list("0 1\n1 2\n").unwrap();
        assert_eq!((lg.graph.n(), lg.graph.edge_count()), (3, 2));
    }

    #[test]
    fn comments_and_loops() {
        let lg = parse_edge_list("# comment\n5 5\n5 6\n").unwrap();
        assert_eq!((lg.graph.n(), lg.graph.edge_count()), (2, 1));
        assert_eq!(lg.report.self_loops, 1);
        assert_eq!(lg.original_ids, vec![5, 6]);
    }

    #[test]
    fn comma_separated_with_header() {
        let lg = parse_edge_list("node_1,node_2\n0,1\n1, 2\n2\t0\n0,1\n").unwrap();
        assert!(lg.skipped_header);
        assert_eq!(lg.graph.edge_count(), 3);
        assert_eq!(lg.report.duplicates, 1);
    }

    #[test]
    fn malformed_lines_report_position() {
        match parse_edge_list("0 1\n\n1 x\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        match parse_edge_list("0 1 2\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("unexpected {other:?}"),
        }
        // A header is only tolerated before any data.
        assert!(parse_edge_list("0 1\na b\n").is_err());
    }

    #[test]
    fn roundtrip() {
        let (g, _) = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        let text = format_edge_list(&g);
        let back = parse_edge_list(&text).unwrap();
        assert_eq!(back.graph, g);
        assert_eq!(format_edge_list(&back.graph), text);
    }
}
