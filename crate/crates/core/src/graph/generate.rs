//! Random graph models.

use rand::Rng;

use super::{Graph, GraphError, NodeId};
use crate::rng::RngSeed;

/// G(n, p): every one of the `n(n-1)/2` pairs is an edge independently with
/// probability `p`. Pairs are visited in lexicographic order.
pub fn erdos_renyi(n: usize, p: f64, seed: RngSeed) -> Result<Graph, GraphError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GraphError::InvalidParameter {
            name: "p",
            reason: format!("edge probability must lie in [0, 1], got {p}"),
        });
    }
    let mut rng = seed.rng();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// Preferential attachment.
///
/// Starts from a clique on the first `m` nodes. Each later node picks `m`
/// distinct targets among the existing nodes, each draw proportional to the
/// current degree (redrawing on repeats); degrees are updated after the node
/// is attached. When every existing degree is zero (only for `m = 1`, first
/// step) the target is uniform. The result is simple and connected with
/// `C(m, 2) + (n - m) * m` edges.
pub fn barabasi_albert(n: usize, m: usize, seed: RngSeed) -> Result<Graph, GraphError> {
    if m == 0 || m >= n {
        return Err(GraphError::InvalidParameter {
            name: "m",
            reason: format!("need 1 <= m < n, got m = {m}, n = {n}"),
        });
    }
    let mut rng = seed.rng();
    let mut edges: Vec<(NodeId, NodeId)> = Vec::with_capacity(m * (m - 1) / 2 + (n - m) * m);
    // one entry per edge endpoint: a uniform draw from it is degree-proportional
    let mut endpoints: Vec<NodeId> = Vec::with_capacity(2 * edges.capacity());
    for u in 0..m {
        for v in (u + 1)..m {
            edges.push((u, v));
            endpoints.push(u);
            endpoints.push(v);
        }
    }
    let mut targets: Vec<NodeId> = Vec::with_capacity(m);
    for new in m..n {
        targets.clear();
        while targets.len() < m {
            let t = if endpoints.is_empty() {
                rng.random_range(0..new)
            } else {
                endpoints[rng.random_range(0..endpoints.len())]
            };
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            edges.push((t, new));
            endpoints.push(t);
            endpoints.push(new);
        }
    }
    Graph::from_edges(n, edges)
}
