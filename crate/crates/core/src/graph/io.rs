//! Plain-text edge lists.
//!
//! One edge per line, two whitespace-separated node labels. Lines starting
//! with `#` or `%` are comments. The writer additionally records isolated
//! nodes as `#! node <label>` comment lines so that a write/read round trip
//! keeps the node set; other tools see them as ordinary comments.

use std::collections::HashMap;
use std::io::{self, BufRead, Write};
use std::path::Path;

use super::{DroppedEdges, Graph, GraphError, NodeId};

const NODE_DIRECTIVE: &str = "#! node";

/// Result of parsing an edge list.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedEdgeList {
    pub graph: Graph,
    pub dropped: DroppedEdges,
}

pub fn parse_edge_list(text: &str) -> Result<ParsedEdgeList, GraphError> {
    parse_lines(text.lines().map(Ok::<_, io::Error>)).map_err(|e| match e {
        ParseFailure::Graph(g) => g,
        ParseFailure::Io(_) => unreachable!("in-memory input"),
    })
}

/// Reads and parses an edge-list file.
pub fn read_edge_list(path: impl AsRef<Path>) -> Result<ParsedEdgeList, crate::Error> {
    let file = std::fs::File::open(path.as_ref())?;
    parse_lines(io::BufReader::new(file).lines()).map_err(|e| match e {
        ParseFailure::Graph(g) => crate::Error::Graph(g),
        ParseFailure::Io(e) => crate::Error::Io(e),
    })
}

enum ParseFailure {
    Graph(GraphError),
    Io(io::Error),
}

fn parse_lines<I, S>(lines: I) -> Result<ParsedEdgeList, ParseFailure>
where
    I: IntoIterator<Item = io::Result<S>>,
    S: AsRef<str>,
{
    let mut ids: HashMap<String, NodeId> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut edges = Vec::new();
    let mut saw_data = false;

    let mut intern = |label: &str| -> NodeId {
        if let Some(&id) = ids.get(label) {
            return id;
        }
        let id = labels.len();
        ids.insert(label.to_owned(), id);
        labels.push(label.to_owned());
        id
    };

    for (idx, line) in lines.into_iter().enumerate() {
        let line = line.map_err(ParseFailure::Io)?;
        let line = line.as_ref().trim();
        if let Some(rest) = line.strip_prefix(NODE_DIRECTIVE) {
            if let Some(label) = rest.split_whitespace().next() {
                intern(label);
                saw_data = true;
            }
            continue;
        }
        if line.is_empty() || line.starts_with('#') || line.starts_with('%') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        match (tokens.next(), tokens.next(), tokens.next()) {
            (Some(a), Some(b), None) => {
                let u = intern(a);
                let v = intern(b);
                edges.push((u, v));
                saw_data = true;
            }
            _ => {
                return Err(ParseFailure::Graph(GraphError::MalformedLine {
                    line: idx + 1,
                    found: line.split_whitespace().count(),
                }))
            }
        }
    }
    if !saw_data {
        return Err(ParseFailure::Graph(GraphError::EmptyInput));
    }
    let (graph, dropped) = Graph::from_edges_counted(labels.len(), edges).map_err(ParseFailure::Graph)?;
    let graph = graph.with_labels(labels).map_err(ParseFailure::Graph)?;
    Ok(ParsedEdgeList { graph, dropped })
}

/// Writes `g` as an edge list, using labels when present, numeric ids
/// otherwise.
pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> io::Result<()> {
    writeln!(out, "# nodes {} edges {}", g.node_count(), g.edge_count())?;
    for u in (0..g.node_count()).filter(|&u| g.degree(u) == 0) {
        writeln!(out, "{NODE_DIRECTIVE} {}", g.node_name(u))?;
    }
    for (u, v) in g.edges() {
        writeln!(out, "{} {}", g.node_name(u), g.node_name(v))?;
    }
    out.flush()
}
