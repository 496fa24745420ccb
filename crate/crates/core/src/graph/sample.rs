use std::collections::HashSet;

use rand::seq::index;
use rand::Rng;

use super::{Graph, GraphError, NodeId};
use crate::rng::RngSeed;

/// Draws `k` distinct non-edges of `g` uniformly without replacement.
/// Pairs are returned as `(u, v)` with `u < v`, sorted.
pub fn non_edge_sample(g: &Graph, k: usize, seed: RngSeed) -> Result<Vec<(NodeId, NodeId)>, GraphError> {
    sample_non_edges(g, k, &mut seed.rng())
}

pub(crate) fn sample_non_edges<R: Rng + ?Sized>(
    g: &Graph,
    k: usize,
    rng: &mut R,
) -> Result<Vec<(NodeId, NodeId)>, GraphError> {
    let available = g.non_edge_count();
    if k > available {
        return Err(GraphError::NotEnoughNonEdges {
            requested: k,
            available,
        });
    }
    if k == 0 {
        return Ok(Vec::new());
    }
    let n = g.node_count();
    let total = n * (n - 1) / 2;

    let mut picked = if 4 * available >= total && 2 * k <= available {
        // Rejection: each accepted pair is uniform over the remaining
        // non-edges, so the k-set is a uniform draw without replacement.
        let mut chosen: HashSet<(NodeId, NodeId)> = HashSet::with_capacity(k);
        let mut out = Vec::with_capacity(k);
        while out.len() < k {
            let a = rng.random_range(0..n);
            let b = rng.random_range(0..n);
            if a == b {
                continue;
            }
            let pair = (a.min(b), a.max(b));
            if g.has_edge(pair.0, pair.1) || !chosen.insert(pair) {
                continue;
            }
            out.push(pair);
        }
        out
    } else {
        let all: Vec<(NodeId, NodeId)> = (0..n)
            .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
            .filter(|&(u, v)| !g.has_edge(u, v))
            .collect();
        index::sample(rng, all.len(), k).into_iter().map(|i| all[i]).collect()
    };
    picked.sort_unstable();
    Ok(picked)
}
