//! Concordance-based sensitivity between two centrality rankings.
//!
//! Two vectors are compared on the nodes they share (matched by name). A
//! pair of shared nodes is concordant when both vectors order it strictly
//! the same way, discordant when strictly opposite, and a tie otherwise.
//! The sensitivity is `n_c / (n_c + n_d)`, which equals `(gamma + 1) / 2`
//! for Goodman and Kruskal's gamma.
//!
//! Counting runs in `O(n log n)`: each vector is reduced to tie-class ranks
//! (consecutive sorted scores within [`TIE_RELATIVE_TOLERANCE`] share a
//! class), ties are counted per class, and discordant pairs are the strict
//! inversions of the second ranking after sorting by the first.
//!
//! [`TIE_RELATIVE_TOLERANCE`]: crate::centrality::TIE_RELATIVE_TOLERANCE

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::centrality::{tied, CentralityVector};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SensitivityError {
    #[error("need at least 2 nodes present in both rankings, found {0}")]
    TooFewCommonNodes(usize),
    #[error("sensitivity undefined: every pair of common nodes is tied")]
    Undefined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PairClassification {
    pub concordant: u64,
    pub discordant: u64,
    /// Pairs tied in either ranking.
    pub ties: u64,
    pub compared_nodes: usize,
}

impl PairClassification {
    pub fn total_pairs(&self) -> u64 {
        let n = self.compared_nodes as u64;
        n * n.saturating_sub(1) / 2
    }

    pub fn gamma(&self) -> Result<f64, SensitivityError> {
        gamma(self)
    }

    pub fn rho(&self) -> Result<f64, SensitivityError> {
        let untied = self.concordant + self.discordant;
        if untied == 0 {
            return Err(SensitivityError::Undefined);
        }
        Ok(self.concordant as f64 / untied as f64)
    }
}

/// Goodman and Kruskal's gamma, `(n_c - n_d) / (n_c + n_d)`.
pub fn gamma(pc: &PairClassification) -> Result<f64, SensitivityError> {
    let untied = pc.concordant + pc.discordant;
    if untied == 0 {
        return Err(SensitivityError::Undefined);
    }
    Ok((pc.concordant as f64 - pc.discordant as f64) / untied as f64)
}

/// Sensitivity `n_c / (n_c + n_d)` of `a` against `b`.
pub fn sensitivity(a: &CentralityVector, b: &CentralityVector) -> Result<f64, SensitivityError> {
    classify_pairs(a, b)?.rho()
}

pub fn classify_pairs(a: &CentralityVector, b: &CentralityVector) -> Result<PairClassification, SensitivityError> {
    let (xs, ys) = align(a, b);
    classify_aligned(&xs, &ys)
}

/// Classifies pairs of two score slices that are already aligned by index.
pub fn classify_aligned(xs: &[f64], ys: &[f64]) -> Result<PairClassification, SensitivityError> {
    assert_eq!(xs.len(), ys.len(), "aligned slices must have equal length");
    let n = xs.len();
    if n < 2 {
        return Err(SensitivityError::TooFewCommonNodes(n));
    }
    let rx = tie_ranks(xs);
    let ry = tie_ranks(ys);

    let mut pairs: Vec<(u32, u32)> = rx.iter().copied().zip(ry.iter().copied()).collect();
    pairs.sort_unstable();

    let ties_x = tied_pairs(&rx);
    let ties_y = tied_pairs(&ry);
    let ties_both = {
        let mut total = 0u64;
        let mut run = 1u64;
        for w in pairs.windows(2) {
            if w[0] == w[1] {
                run += 1;
            } else {
                total += run * (run - 1) / 2;
                run = 1;
            }
        }
        total + run * (run - 1) / 2
    };
    let ties = ties_x + ties_y - ties_both;

    let mut second: Vec<u32> = pairs.iter().map(|p| p.1).collect();
    let mut scratch = vec![0u32; n];
    let discordant = count_inversions(&mut second, &mut scratch);

    let total = (n as u64) * (n as u64 - 1) / 2;
    Ok(PairClassification {
        concordant: total - ties - discordant,
        discordant,
        ties,
        compared_nodes: n,
    })
}

/// Scores of the nodes common to both vectors, in matching order.
fn align(a: &CentralityVector, b: &CentralityVector) -> (Vec<f64>, Vec<f64>) {
    let same_table = match (a.labels(), b.labels()) {
        (None, None) => true,
        (Some(x), Some(y)) => Arc::ptr_eq(x, y) || x == y,
        _ => false,
    };
    if same_table {
        let n = a.graph_n().min(b.graph_n());
        return (a.scores[..n].to_vec(), b.scores[..n].to_vec());
    }
    let index: HashMap<String, usize> = (0..b.graph_n()).map(|v| (b.node_name(v), v)).collect();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for u in 0..a.graph_n() {
        if let Some(&v) = index.get(&a.node_name(u)) {
            xs.push(a.scores[u]);
            ys.push(b.scores[v]);
        }
    }
    (xs, ys)
}

/// Dense tie-class rank per entry. Sorted neighbours within tolerance share a
/// class, so a run of near-equal values chains into one class.
fn tie_ranks(values: &[f64]) -> Vec<u32> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_unstable_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut ranks = vec![0u32; values.len()];
    let mut rank = 0u32;
    for w in 0..order.len() {
        if w > 0 && !tied(values[order[w - 1]], values[order[w]]) {
            rank += 1;
        }
        ranks[order[w]] = rank;
    }
    ranks
}

fn tied_pairs(ranks: &[u32]) -> u64 {
    let mut counts: HashMap<u32, u64> = HashMap::new();
    for &r in ranks {
        *counts.entry(r).or_default() += 1;
    }
    counts.values().map(|&c| c * (c - 1) / 2).sum()
}

/// Number of pairs `i < j` with `v[i] > v[j]` (strict); sorts `v`.
fn count_inversions(v: &mut [u32], scratch: &mut [u32]) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut inv = {
        let (left, right) = v.split_at_mut(mid);
        let (sl, sr) = scratch.split_at_mut(mid);
        count_inversions(left, sl) + count_inversions(right, sr)
    };
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if v[i] <= v[j] {
            scratch[k] = v[i];
            i += 1;
        } else {
            scratch[k] = v[j];
            inv += (mid - i) as u64;
            j += 1;
        }
        k += 1;
    }
    scratch[k..k + mid - i].copy_from_slice(&v[i..mid]);
    k += mid - i;
    scratch[k..k + n - j].copy_from_slice(&v[j..n]);
    v.copy_from_slice(&scratch[..n]);
    inv
}
