//! Undirected simple graphs with stable node identities.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use thiserror::Error;

mod generate;
mod io;
pub(crate) mod sample;

pub use generate::{barabasi_albert, erdos_renyi};
pub use io::{parse_edge_list, read_edge_list, write_edge_list, ParsedEdgeList};
pub use sample::non_edge_sample;

/// Dense node index, `0..n`.
pub type NodeId = usize;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("line {line}: expected 2 node labels, found {found}")]
    MalformedLine { line: usize, found: usize },
    #[error("edge list contains no edges")]
    EmptyInput,
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("requested {requested} non-edges but only {available} exist")]
    NotEnoughNonEdges { requested: usize, available: usize },
    #[error("edge ({0}, {1}) references a node outside the graph")]
    NodeOutOfRange(NodeId, NodeId),
    #[error("label count {labels} does not match node count {nodes}")]
    LabelMismatch { labels: usize, nodes: usize },
    #[error("duplicate node label `{0}`")]
    DuplicateLabel(String),
}

/// An undirected, unweighted simple graph.
///
/// Adjacency lists are kept sorted, so membership tests are binary searches.
/// Labels, when present, are shared behind an `Arc` so that perturbations that
/// keep the node set (edge additions and removals) reuse the same table; the
/// sensitivity module uses pointer equality on that table as a fast path for
/// aligning nodes.
#[derive(Debug, Clone)]
pub struct Graph {
    adjacency: Vec<Vec<NodeId>>,
    edge_count: usize,
    labels: Option<Arc<[String]>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.adjacency == other.adjacency && self.labels.as_deref() == other.labels.as_deref()
    }
}

impl Graph {
    /// Edgeless graph on `n` unlabeled nodes.
    pub fn empty(n: usize) -> Self {
        Self {
            adjacency: vec![Vec::new(); n],
            edge_count: 0,
            labels: None,
        }
    }

    /// Builds a graph from an edge iterator, silently dropping self-loops and
    /// duplicates. Use [`Graph::from_edges_counted`] to learn how many were
    /// dropped.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        Self::from_edges_counted(n, edges).map(|(g, _)| g)
    }

    /// Like [`Graph::from_edges`], also returning `(duplicates, self_loops)`.
    pub fn from_edges_counted<I>(n: usize, edges: I) -> Result<(Self, DroppedEdges), GraphError>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut adjacency = vec![Vec::new(); n];
        let mut dropped = DroppedEdges::default();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::NodeOutOfRange(u, v));
            }
            if u == v {
                dropped.self_loops += 1;
                continue;
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        let mut incidences = 0;
        for list in &mut adjacency {
            let before = list.len();
            list.sort_unstable();
            list.dedup();
            // each duplicate edge is seen from both endpoints
            dropped.duplicates += before - list.len();
            incidences += list.len();
        }
        dropped.duplicates /= 2;
        Ok((
            Self {
                adjacency,
                edge_count: incidences / 2,
                labels: None,
            },
            dropped,
        ))
    }

    /// Attaches node labels. Labels must be unique and one per node.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, GraphError> {
        if labels.len() != self.node_count() {
            return Err(GraphError::LabelMismatch {
                labels: labels.len(),
                nodes: self.node_count(),
            });
        }
        let mut seen = HashSet::with_capacity(labels.len());
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(GraphError::DuplicateLabel(l.clone()));
            }
        }
        self.labels = Some(labels.into());
        Ok(self)
    }

    pub(crate) fn with_shared_labels(mut self, labels: Option<Arc<[String]>>) -> Self {
        debug_assert!(labels.as_ref().is_none_or(|l| l.len() == self.node_count()));
        self.labels = labels;
        self
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.adjacency[u]
    }

    pub fn degree(&self, u: NodeId) -> usize {
        self.adjacency[u].len()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        u < self.node_count() && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Number of node pairs that are not edges.
    pub fn non_edge_count(&self) -> usize {
        let n = self.node_count();
        n * n.saturating_sub(1) / 2 - self.edge_count
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub(crate) fn shared_labels(&self) -> Option<&Arc<[String]>> {
        self.labels.as_ref()
    }

    /// Label of `u` if the graph is labeled, otherwise its numeric id.
    pub fn node_name(&self, u: NodeId) -> String {
        match &self.labels {
            Some(l) => l[u].clone(),
            None => u.to_string(),
        }
    }

    /// Names of all nodes, materializing numeric ids for unlabeled graphs.
    pub fn node_names(&self) -> Vec<String> {
        (0..self.node_count()).map(|u| self.node_name(u)).collect()
    }

    /// Subgraph induced by `keep` (must be strictly increasing). Survivors
    /// keep their identity: unlabeled graphs gain labels equal to the old ids.
    pub fn induced_subgraph(&self, keep: &[NodeId]) -> Self {
        debug_assert!(keep.windows(2).all(|w| w[0] < w[1]));
        let mut remap = vec![usize::MAX; self.node_count()];
        for (new, &old) in keep.iter().enumerate() {
            remap[old] = new;
        }
        let mut adjacency = Vec::with_capacity(keep.len());
        let mut incidences = 0;
        for &old in keep {
            let list: Vec<NodeId> = self.adjacency[old]
                .iter()
                .filter_map(|&v| (remap[v] != usize::MAX).then_some(remap[v]))
                .collect();
            incidences += list.len();
            adjacency.push(list);
        }
        let labels: Arc<[String]> = keep.iter().map(|&u| self.node_name(u)).collect();
        Self {
            adjacency,
            edge_count: incidences / 2,
            labels: Some(labels),
        }
    }

    /// Connected components, each sorted ascending, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<NodeId>> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut comp = Vec::new();
            while let Some(u) = queue.pop_front() {
                comp.push(u);
                for &v in &self.adjacency[u] {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Induced subgraph on the largest connected component. Ties go to the
    /// component holding the smallest node id. Labels are preserved.
    pub fn largest_connected_component(&self) -> Self {
        let comps = self.connected_components();
        // components come ordered by smallest member, so the first max wins
        let best = comps
            .iter()
            .enumerate()
            .max_by(|(i, a), (j, b)| a.len().cmp(&b.len()).then(j.cmp(i)))
            .map(|(i, _)| i);
        match best {
            None => Self::empty(0),
            Some(i) if comps[i].len() == self.node_count() => self.clone(),
            Some(i) => self.induced_subgraph(&comps[i]),
        }
    }

    /// Map from node name to id.
    pub fn name_index(&self) -> HashMap<String, NodeId> {
        (0..self.node_count()).map(|u| (self.node_name(u), u)).collect()
    }
}

/// Inputs dropped while enforcing simplicity.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DroppedEdges {
    pub duplicates: usize,
    pub self_loops: usize,
}
