//! Error mechanisms and imputation mechanisms as seeded graph samplers.
//!
//! An error mechanism maps a graph to a random graph modelling measurement
//! error; an imputation mechanism tries to undo one. Each call to
//! [`apply_error`] or [`apply_imputation`] draws a single outcome.
//!
//! Counts are `k = round(level * population)` with halves rounded up.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::Rng;
use thiserror::Error;

use crate::graph::{sample::sample_non_edges, Graph, GraphError, NodeId};
use crate::rng::RngSeed;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PerturbError {
    #[error("error level must lie in [0, 1), got {0}")]
    InvalidLevel(f64),
    #[error("unknown mechanism token `{0}` (expected rm_nodes, rm_edges_unif, rm_edges_prop or add_edges followed by :level)")]
    InvalidToken(String),
    #[error("cannot remove {requested} of {available} {what}")]
    RemovalExceedsPopulation {
        what: &'static str,
        requested: usize,
        available: usize,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ErrorKind {
    RemoveNodesUniform,
    RemoveEdgesUniform,
    RemoveEdgesProportional,
    AddEdgesUniform,
}

impl ErrorKind {
    pub const ALL: [ErrorKind; 4] = [
        ErrorKind::AddEdgesUniform,
        ErrorKind::RemoveEdgesProportional,
        ErrorKind::RemoveEdgesUniform,
        ErrorKind::RemoveNodesUniform,
    ];

    pub fn token(self) -> &'static str {
        match self {
            ErrorKind::RemoveNodesUniform => "rm_nodes",
            ErrorKind::RemoveEdgesUniform => "rm_edges_unif",
            ErrorKind::RemoveEdgesProportional => "rm_edges_prop",
            ErrorKind::AddEdgesUniform => "add_edges",
        }
    }
}

/// An error mechanism: what goes wrong, and to what fraction of the graph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorMechanism {
    pub kind: ErrorKind,
    level: f64,
}

impl ErrorMechanism {
    pub fn new(kind: ErrorKind, level: f64) -> Result<Self, PerturbError> {
        if !(0.0..1.0).contains(&level) {
            return Err(PerturbError::InvalidLevel(level));
        }
        Ok(Self { kind, level })
    }

    pub fn level(&self) -> f64 {
        self.level
    }
}

impl fmt::Display for ErrorMechanism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.kind.token(), self.level)
    }
}

impl FromStr for ErrorMechanism {
    type Err = PerturbError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PerturbError::InvalidToken(s.to_owned());
        let (name, level) = s.trim().split_once(':').ok_or_else(bad)?;
        let kind = match name {
            "rm_nodes" => ErrorKind::RemoveNodesUniform,
            "rm_edges_unif" => ErrorKind::RemoveEdgesUniform,
            "rm_edges_prop" => ErrorKind::RemoveEdgesProportional,
            "add_edges" => ErrorKind::AddEdgesUniform,
            _ => return Err(bad()),
        };
        let level: f64 = level.parse().map_err(|_| bad())?;
        Self::new(kind, level)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ImputationKind {
    AddUniformNonEdges,
    RemoveUniformEdges,
    AddNodesDegreeSampled,
}

/// An imputation mechanism with its magnitude `count`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ImputationMechanism {
    pub kind: ImputationKind,
    pub count: usize,
}

/// `round(x)` with halves rounded up; `x` is non-negative.
pub(crate) fn round_count(x: f64) -> usize {
    (x + 0.5 + 1e-9).floor() as usize
}

/// Draws one sample of `phi(g)`.
pub fn apply_error(g: &Graph, phi: &ErrorMechanism, seed: RngSeed) -> Result<Graph, PerturbError> {
    apply_error_with(g, phi, &mut seed.rng())
}

pub(crate) fn apply_error_with<R: Rng + ?Sized>(
    g: &Graph,
    phi: &ErrorMechanism,
    rng: &mut R,
) -> Result<Graph, PerturbError> {
    match phi.kind {
        ErrorKind::RemoveNodesUniform => {
            let n = g.node_count();
            let k = round_count(phi.level * n as f64);
            check_removal("nodes", k, n)?;
            if k == 0 {
                return Ok(g.clone());
            }
            remove_random_nodes(g, k, rng)
        }
        ErrorKind::RemoveEdgesUniform => {
            let m = g.edge_count();
            let k = round_count(phi.level * m as f64);
            check_removal("edges", k, m)?;
            remove_random_edges(g, k, rng)
        }
        ErrorKind::RemoveEdgesProportional => {
            let m = g.edge_count();
            let k = round_count(phi.level * m as f64);
            check_removal("edges", k, m)?;
            if k == 0 {
                return Ok(g.clone());
            }
            let edges: Vec<(NodeId, NodeId)> = g.edges().collect();
            // weights frozen at the input graph's degrees
            let weight = |i: usize| (g.degree(edges[i].0) + g.degree(edges[i].1)) as f64;
            let drop = index::sample_weighted(rng, edges.len(), weight, k)
                .expect("edge weights are positive and k <= |E|");
            let mut removed = vec![false; edges.len()];
            for i in drop {
                removed[i] = true;
            }
            rebuild(g, edges.into_iter().zip(removed).filter(|(_, r)| !r).map(|(e, _)| e))
        }
        ErrorKind::AddEdgesUniform => {
            let k = round_count(phi.level * g.edge_count() as f64);
            add_random_non_edges(g, k, rng)
        }
    }
}

/// The imputation mechanism that undoes `phi`, sized from the observed graph.
///
/// With `a` the error level: missing edges are topped up by
/// `|E_obs| * a / (1 - a)`, spurious edges trimmed by `|E_obs| * a / (1 + a)`,
/// and missing nodes replaced by `n_obs * a / (1 - a)`.
pub fn invert_error(phi: &ErrorMechanism, observed: &Graph) -> ImputationMechanism {
    let a = phi.level;
    let m = observed.edge_count() as f64;
    let n = observed.node_count() as f64;
    match phi.kind {
        ErrorKind::RemoveEdgesUniform | ErrorKind::RemoveEdgesProportional => ImputationMechanism {
            kind: ImputationKind::AddUniformNonEdges,
            count: round_count(m * a / (1.0 - a)),
        },
        ErrorKind::AddEdgesUniform => ImputationMechanism {
            kind: ImputationKind::RemoveUniformEdges,
            count: round_count(m * a / (1.0 + a)),
        },
        ErrorKind::RemoveNodesUniform => ImputationMechanism {
            kind: ImputationKind::AddNodesDegreeSampled,
            count: round_count(n * a / (1.0 - a)),
        },
    }
}

/// Draws one sample of `psi(g)`.
pub fn apply_imputation(g: &Graph, psi: &ImputationMechanism, seed: RngSeed) -> Result<Graph, PerturbError> {
    apply_imputation_with(g, psi, &mut seed.rng())
}

pub(crate) fn apply_imputation_with<R: Rng + ?Sized>(
    g: &Graph,
    psi: &ImputationMechanism,
    rng: &mut R,
) -> Result<Graph, PerturbError> {
    let k = psi.count;
    match psi.kind {
        ImputationKind::AddUniformNonEdges => add_random_non_edges(g, k, rng),
        ImputationKind::RemoveUniformEdges => {
            if k > g.edge_count() {
                return Err(PerturbError::RemovalExceedsPopulation {
                    what: "edges",
                    requested: k,
                    available: g.edge_count(),
                });
            }
            remove_random_edges(g, k, rng)
        }
        ImputationKind::AddNodesDegreeSampled => Ok(add_degree_sampled_nodes(g, k, rng)),
    }
}

fn check_removal(what: &'static str, k: usize, available: usize) -> Result<(), PerturbError> {
    if k > 0 && k >= available {
        return Err(PerturbError::RemovalExceedsPopulation {
            what,
            requested: k,
            available,
        });
    }
    Ok(())
}

fn rebuild<I: IntoIterator<Item = (NodeId, NodeId)>>(g: &Graph, edges: I) -> Result<Graph, PerturbError> {
    Ok(Graph::from_edges(g.node_count(), edges)?.with_shared_labels(g.shared_labels().cloned()))
}

fn remove_random_nodes<R: Rng + ?Sized>(g: &Graph, k: usize, rng: &mut R) -> Result<Graph, PerturbError> {
    let n = g.node_count();
    let mut gone = vec![false; n];
    for i in index::sample(rng, n, k) {
        gone[i] = true;
    }
    let keep: Vec<NodeId> = (0..n).filter(|&u| !gone[u]).collect();
    Ok(g.induced_subgraph(&keep))
}

fn remove_random_edges<R: Rng + ?Sized>(g: &Graph, k: usize, rng: &mut R) -> Result<Graph, PerturbError> {
    if k == 0 {
        return Ok(g.clone());
    }
    let edges: Vec<(NodeId, NodeId)> = g.edges().collect();
    let mut removed = vec![false; edges.len()];
    for i in index::sample(rng, edges.len(), k) {
        removed[i] = true;
    }
    rebuild(g, edges.into_iter().zip(removed).filter(|(_, r)| !r).map(|(e, _)| e))
}

fn add_random_non_edges<R: Rng + ?Sized>(g: &Graph, k: usize, rng: &mut R) -> Result<Graph, PerturbError> {
    if k == 0 {
        return Ok(g.clone());
    }
    let extra = sample_non_edges(g, k, rng)?;
    rebuild(g, g.edges().chain(extra))
}

/// Adds `k` nodes. Their degrees are drawn up front from the degree
/// distribution of `g`; the nodes are then attached one at a time, each to
/// that many distinct existing nodes chosen uniformly.
fn add_degree_sampled_nodes<R: Rng + ?Sized>(g: &Graph, k: usize, rng: &mut R) -> Graph {
    if k == 0 {
        return g.clone();
    }
    let n0 = g.node_count();
    // a drawn degree is below n0, so it never exceeds the nodes available
    let drawn: Vec<usize> = (0..k).map(|_| if n0 == 0 { 0 } else { g.degree(rng.random_range(0..n0)) }).collect();
    let mut edges: Vec<(NodeId, NodeId)> = g.edges().collect();
    for (i, &d) in drawn.iter().enumerate() {
        let new = n0 + i;
        for t in index::sample(rng, new, d) {
            edges.push((t, new));
        }
    }
    let grown = Graph::from_edges(n0 + k, edges).expect("endpoints are in range");
    match g.labels() {
        None => grown,
        Some(labels) => {
            let taken: HashSet<&str> = labels.iter().map(String::as_str).collect();
            let mut names = labels.to_vec();
            let mut next = 0usize;
            while names.len() < n0 + k {
                let candidate = format!("imputed{next}");
                next += 1;
                if !taken.contains(candidate.as_str()) {
                    names.push(candidate);
                }
            }
            grown.with_labels(names).expect("fresh labels are unique")
        }
    }
}
