//! The five node-centrality measures on undirected simple graphs.
//!
//! Conventions that matter for rank comparisons:
//!
//! * Closeness charges distance `n` for unreachable pairs, so disconnected
//!   graphs still get a score for every node. Isolated nodes score 0, which
//!   is also the lowest rank they would get under the distance-`n` rule.
//! * Betweenness is unnormalized and counts each unordered pair once.
//! * Eigenvector centrality runs power iteration on `A + I` (same
//!   eigenvectors as `A`, but bipartite graphs converge) from the uniform
//!   vector and scales to unit maximum. Entries below ten times the tolerance are
//!   reported as exactly 0; on disconnected graphs this is where
//!   non-dominant components end up.
//! * PageRank walks each edge in both directions; isolated nodes teleport
//!   uniformly.

use std::collections::VecDeque;
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::graph::Graph;

/// Relative tolerance under which two scores count as tied.
pub const TIE_RELATIVE_TOLERANCE: f64 = 1e-12;

/// `true` if `a` and `b` are equal up to [`TIE_RELATIVE_TOLERANCE`].
#[inline]
pub fn tied(a: f64, b: f64) -> bool {
    (a - b).abs() <= TIE_RELATIVE_TOLERANCE * a.abs().max(b.abs())
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CentralityError {
    #[error("eigenvector centrality is undefined on a graph without edges")]
    NoEdges,
    #[error("invalid centrality configuration: {0}")]
    InvalidConfig(String),
    #[error("unknown centrality measure `{0}` (expected one of bc, cc, dc, ec, pr)")]
    UnknownMeasure(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Measure {
    Betweenness,
    Closeness,
    Degree,
    Eigenvector,
    PageRank,
}

impl Measure {
    pub const ALL: [Measure; 5] = [
        Measure::Betweenness,
        Measure::Closeness,
        Measure::Degree,
        Measure::Eigenvector,
        Measure::PageRank,
    ];

    pub fn token(self) -> &'static str {
        match self {
            Measure::Betweenness => "bc",
            Measure::Closeness => "cc",
            Measure::Degree => "dc",
            Measure::Eigenvector => "ec",
            Measure::PageRank => "pr",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Measure {
    type Err = CentralityError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "bc" | "betweenness" => Measure::Betweenness,
            "cc" | "closeness" => Measure::Closeness,
            "dc" | "degree" => Measure::Degree,
            "ec" | "eigenvector" => Measure::Eigenvector,
            "pr" | "pagerank" => Measure::PageRank,
            _ => return Err(CentralityError::UnknownMeasure(s.to_owned())),
        })
    }
}

/// A measure together with its numerical settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CentralityMeasure {
    pub kind: Measure,
    /// PageRank damping factor.
    pub damping: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl CentralityMeasure {
    pub fn new(kind: Measure) -> Self {
        let max_iterations = match kind {
            Measure::Eigenvector => 1000,
            _ => 200,
        };
        Self {
            kind,
            damping: 0.85,
            tolerance: 1e-10,
            max_iterations,
        }
    }

    pub fn validate(&self) -> Result<(), CentralityError> {
        if !(self.damping > 0.0 && self.damping < 1.0) {
            return Err(CentralityError::InvalidConfig(format!(
                "damping must lie in (0, 1), got {}",
                self.damping
            )));
        }
        if !(self.tolerance > 0.0) {
            return Err(CentralityError::InvalidConfig(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.max_iterations == 0 {
            return Err(CentralityError::InvalidConfig("max_iterations must be positive".into()));
        }
        Ok(())
    }

    pub fn compute(&self, g: &Graph) -> Result<CentralityVector, CentralityError> {
        self.validate()?;
        Ok(match self.kind {
            Measure::Degree => degree(g),
            Measure::Closeness => closeness(g),
            Measure::Betweenness => betweenness(g),
            Measure::Eigenvector => eigenvector(g, self)?,
            Measure::PageRank => pagerank(g, self),
        })
    }
}

impl From<Measure> for CentralityMeasure {
    fn from(kind: Measure) -> Self {
        Self::new(kind)
    }
}

/// Scores of one measure on one graph, indexed by node id.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityVector {
    pub measure: Measure,
    pub scores: Vec<f64>,
    /// `false` if an iterative measure hit its iteration cap.
    pub converged: bool,
    labels: Option<Arc<[String]>>,
}

impl CentralityVector {
    fn new(g: &Graph, measure: Measure, scores: Vec<f64>, converged: bool) -> Self {
        debug_assert_eq!(scores.len(), g.node_count());
        Self {
            measure,
            scores,
            converged,
            labels: g.shared_labels().cloned(),
        }
    }

    /// Wraps raw scores for nodes named `0..len` (no labels).
    pub fn from_scores(measure: Measure, scores: Vec<f64>) -> Self {
        Self {
            measure,
            scores,
            converged: true,
            labels: None,
        }
    }

    /// Wraps raw scores for explicitly named nodes.
    pub fn from_named_scores(measure: Measure, labels: Vec<String>, scores: Vec<f64>) -> Self {
        assert_eq!(labels.len(), scores.len(), "one label per score");
        Self {
            measure,
            scores,
            converged: true,
            labels: Some(labels.into()),
        }
    }

    pub fn graph_n(&self) -> usize {
        self.scores.len()
    }

    pub fn node_name(&self, u: usize) -> String {
        match &self.labels {
            Some(l) => l[u].clone(),
            None => u.to_string(),
        }
    }

    pub(crate) fn labels(&self) -> Option<&Arc<[String]>> {
        self.labels.as_ref()
    }

    /// CSV with header `node_label,score,measure`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "node_label,score,measure")?;
        for (u, s) in self.scores.iter().enumerate() {
            writeln!(out, "{},{},{}", self.node_name(u), s, self.measure)?;
        }
        Ok(())
    }
}

pub fn degree(g: &Graph) -> CentralityVector {
    let scores = (0..g.node_count()).map(|u| g.degree(u) as f64).collect();
    CentralityVector::new(g, Measure::Degree, scores, true)
}

/// Reusable breadth-first search buffers.
struct Bfs {
    dist: Vec<usize>,
    queue: VecDeque<usize>,
}

impl Bfs {
    const UNSEEN: usize = usize::MAX;

    fn new(n: usize) -> Self {
        Self {
            dist: vec![Self::UNSEEN; n],
            queue: VecDeque::with_capacity(n),
        }
    }
}

pub fn closeness(g: &Graph) -> CentralityVector {
    let n = g.node_count();
    let mut bfs = Bfs::new(n);
    let mut scores = vec![0.0; n];
    for s in 0..n {
        if g.degree(s) == 0 {
            continue;
        }
        bfs.dist.fill(Bfs::UNSEEN);
        bfs.dist[s] = 0;
        bfs.queue.push_back(s);
        let mut total = 0usize;
        let mut reached = 1usize;
        while let Some(u) = bfs.queue.pop_front() {
            let du = bfs.dist[u];
            for &v in g.neighbors(u) {
                if bfs.dist[v] == Bfs::UNSEEN {
                    bfs.dist[v] = du + 1;
                    total += du + 1;
                    reached += 1;
                    bfs.queue.push_back(v);
                }
            }
        }
        total += (n - reached) * n;
        scores[s] = (n - 1) as f64 / total as f64;
    }
    CentralityVector::new(g, Measure::Closeness, scores, true)
}

/// Brandes' accumulation over every source.
pub fn betweenness(g: &Graph) -> CentralityVector {
    let n = g.node_count();
    let mut scores = vec![0.0; n];
    let mut bfs = Bfs::new(n);
    let mut sigma = vec![0.0f64; n];
    let mut delta = vec![0.0f64; n];
    let mut order: Vec<usize> = Vec::with_capacity(n);
    for s in 0..n {
        if g.degree(s) == 0 {
            continue;
        }
        bfs.dist.fill(Bfs::UNSEEN);
        sigma.fill(0.0);
        delta.fill(0.0);
        order.clear();
        bfs.dist[s] = 0;
        sigma[s] = 1.0;
        bfs.queue.push_back(s);
        while let Some(u) = bfs.queue.pop_front() {
            order.push(u);
            let du = bfs.dist[u];
            for &v in g.neighbors(u) {
                if bfs.dist[v] == Bfs::UNSEEN {
                    bfs.dist[v] = du + 1;
                    bfs.queue.push_back(v);
                }
                if bfs.dist[v] == du + 1 {
                    sigma[v] += sigma[u];
                }
            }
        }
        // predecessors are recovered from distances instead of being stored
        for &w in order.iter().rev() {
            let dw = bfs.dist[w];
            let coeff = (1.0 + delta[w]) / sigma[w];
            for &v in g.neighbors(w) {
                if bfs.dist[v] != Bfs::UNSEEN && bfs.dist[v] + 1 == dw {
                    delta[v] += sigma[v] * coeff;
                }
            }
            if w != s {
                scores[w] += delta[w];
            }
        }
    }
    for x in &mut scores {
        *x /= 2.0;
    }
    CentralityVector::new(g, Measure::Betweenness, scores, true)
}

pub fn eigenvector(g: &Graph, cfg: &CentralityMeasure) -> Result<CentralityVector, CentralityError> {
    if g.edge_count() == 0 {
        return Err(CentralityError::NoEdges);
    }
    let n = g.node_count();
    let mut x = vec![1.0; n];
    let mut next = vec![0.0; n];
    let mut converged = false;
    for _ in 0..cfg.max_iterations {
        let mut max = 0.0f64;
        for u in 0..n {
            let s = x[u] + g.neighbors(u).iter().map(|&v| x[v]).sum::<f64>();
            next[u] = s;
            max = max.max(s);
        }
        let mut diff = 0.0f64;
        for u in 0..n {
            next[u] /= max;
            diff = diff.max((next[u] - x[u]).abs());
        }
        std::mem::swap(&mut x, &mut next);
        if diff < cfg.tolerance {
            converged = true;
            break;
        }
    }
    // components that are still decaying towards 0 at convergence
    let floor = 10.0 * cfg.tolerance;
    for v in &mut x {
        if *v < floor {
            *v = 0.0;
        }
    }
    Ok(CentralityVector::new(g, Measure::Eigenvector, x, converged))
}

pub fn pagerank(g: &Graph, cfg: &CentralityMeasure) -> CentralityVector {
    let n = g.node_count();
    if n == 0 {
        return CentralityVector::new(g, Measure::PageRank, Vec::new(), true);
    }
    let d = cfg.damping;
    let nf = n as f64;
    let mut x = vec![1.0 / nf; n];
    let mut next = vec![0.0; n];
    let mut share = vec![0.0; n];
    let mut converged = false;
    for _ in 0..cfg.max_iterations {
        let mut dangling = 0.0;
        for u in 0..n {
            let deg = g.degree(u);
            if deg == 0 {
                dangling += x[u];
                share[u] = 0.0;
            } else {
                share[u] = x[u] / deg as f64;
            }
        }
        let base = (1.0 - d) / nf + d * dangling / nf;
        let mut diff = 0.0;
        for v in 0..n {
            let inflow: f64 = g.neighbors(v).iter().map(|&u| share[u]).sum();
            next[v] = base + d * inflow;
            diff += (next[v] - x[v]).abs();
        }
        std::mem::swap(&mut x, &mut next);
        if diff < cfg.tolerance {
            converged = true;
            break;
        }
    }
    let total: f64 = x.iter().sum();
    for v in &mut x {
        *v /= total;
    }
    CentralityVector::new(g, Measure::PageRank, x, converged)
}
