use std::collections::HashMap;
use std::io::{BufRead, Write};

use super::{Graph, NodeId};
use crate::error::{Error, Result};

/// A graph read from an edge list, with the original id of every dense node.
#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: Graph,
    /// `labels[v]` is the id node `v` carried in the input file.
    pub labels: Vec<u64>,
}

impl LoadedGraph {
    pub fn label(&self, v: NodeId) -> u64 {
        self.labels[v]
    }
}

/// Reads a whitespace-separated edge list. Lines starting with `#` and blank
/// lines are skipped. Ids are remapped to `0..n` in order of first appearance;
/// direction, duplicates and self-loops are discarded.
pub fn load_edge_list<R: BufRead>(reader: R) -> Result<LoadedGraph> {
    let mut ids: HashMap<u64, NodeId> = HashMap::new();
    let mut labels = Vec::new();
    let mut edges = Vec::new();
    let mut intern = |raw: u64| {
        *ids.entry(raw).or_insert_with(|| {
            labels.push(raw);
            labels.len() - 1
        })
    };

    for (index, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = index + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected two node ids, found {} tokens", tokens.len()),
            });
        }
        let parse = |token: &str| {
            token.parse::<u64>().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("invalid node id {token:?}"),
            })
        };
        let u = parse(tokens[0])?;
        let v = parse(tokens[1])?;
        let (u, v) = (intern(u), intern(v));
        edges.push((u, v));
    }

    if edges.is_empty() {
        return Err(Error::EmptyInput);
    }
    let graph = Graph::from_edges(labels.len(), edges)?;
    Ok(LoadedGraph { graph, labels })
}

/// Writes one `u v` line per edge with `u < v`, ascending. Isolated nodes do
/// not appear in the output.
pub fn write_edge_list<W: Write>(graph: &Graph, mut out: W) -> Result<()> {
    for (u, v) in graph.edges() {
        writeln!(out, "{u} {v}")?;
    }
    out.flush()?;
    Ok(())
}
