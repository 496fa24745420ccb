//! Reference implementations used as test oracles. They favour directness
//! over speed and share no code with the library.

#![allow(dead_code)]

pub mod invariants;

use netsens::Graph;

/// Pair counts by direct enumeration of all `i < j`, with exact equality as
/// the tie rule.
pub fn brute_force_pairs(xs: &[f64], ys: &[f64]) -> (u64, u64, u64) {
    let (mut c, mut d, mut t) = (0, 0, 0);
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            let dx = xs[i] - xs[j];
            let dy = ys[i] - ys[j];
            if dx == 0.0 || dy == 0.0 {
                t += 1;
            } else if (dx > 0.0) == (dy > 0.0) {
                c += 1;
            } else {
                d += 1;
            }
        }
    }
    (c, d, t)
}

pub fn graph(n: usize, edges: &[(usize, usize)]) -> Graph {
    Graph::from_edges(n, edges.iter().copied()).unwrap()
}

/// The five-node example graph with degrees (1, 2, 3, 1, 1).
pub fn example_hidden() -> Graph {
    graph(5, &[(0, 1), (1, 2), (2, 3), (2, 4)])
}

/// The observed example graph with degrees (1, 2, 1, 0, 0).
pub fn example_observed() -> Graph {
    graph(5, &[(0, 1), (1, 2)])
}

pub fn adjacency(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.node_count();
    let mut a = vec![vec![false; n]; n];
    for (u, v) in g.edges() {
        a[u][v] = true;
        a[v][u] = true;
    }
    a
}

const INF: usize = usize::MAX / 4;

/// All-pairs distances and shortest-path counts by Floyd–Warshall. A shortest
/// path is counted at its largest-index interior node, so each is counted once.
pub fn floyd_counts(g: &Graph) -> (Vec<Vec<usize>>, Vec<Vec<f64>>) {
    let n = g.node_count();
    let a = adjacency(g);
    let mut d = vec![vec![INF; n]; n];
    let mut s = vec![vec![0.0; n]; n];
    for i in 0..n {
        d[i][i] = 0;
        s[i][i] = 1.0;
        for j in 0..n {
            if a[i][j] {
                d[i][j] = 1;
                s[i][j] = 1.0;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if i == j || i == k || j == k || d[i][k] >= INF || d[k][j] >= INF {
                    continue;
                }
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                    s[i][j] = s[i][k] * s[k][j];
                } else if via == d[i][j] {
                    s[i][j] += s[i][k] * s[k][j];
                }
            }
        }
    }
    (d, s)
}

/// `(n - 1) / sum of distances`, unreachable pairs at distance `n`, isolated
/// nodes scored 0.
pub fn closeness_oracle(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    let (d, _) = floyd_counts(g);
    (0..n)
        .map(|i| {
            if g.degree(i) == 0 {
                return 0.0;
            }
            let total: usize = (0..n).filter(|&j| j != i).map(|j| if d[i][j] >= INF { n } else { d[i][j] }).sum();
            (n - 1) as f64 / total as f64
        })
        .collect()
}

/// Sum over unordered pairs `{s, t}` of the share of shortest paths through `v`.
pub fn betweenness_oracle(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    let (d, s) = floyd_counts(g);
    let mut b = vec![0.0; n];
    for v in 0..n {
        for x in 0..n {
            for y in x + 1..n {
                if x == v || y == v || d[x][y] >= INF {
                    continue;
                }
                if d[x][v] < INF && d[v][y] < INF && d[x][v] + d[v][y] == d[x][y] {
                    b[v] += s[x][v] * s[v][y] / s[x][y];
                }
            }
        }
    }
    b
}

/// PageRank as the solution of `(I - d P^T) x = (1 - d) / n`, where `P` is the
/// random-walk matrix with dangling rows spread uniformly. Solved by Gaussian
/// elimination with partial pivoting.
pub fn pagerank_oracle(g: &Graph, damping: f64) -> Vec<f64> {
    let n = g.node_count();
    let a = adjacency(g);
    let mut m = vec![vec![0.0; n + 1]; n];
    for i in 0..n {
        m[i][i] += 1.0;
        m[i][n] = (1.0 - damping) / n as f64;
    }
    for j in 0..n {
        let deg = g.degree(j);
        for i in 0..n {
            let p = if deg == 0 {
                1.0 / n as f64
            } else if a[j][i] {
                1.0 / deg as f64
            } else {
                0.0
            };
            m[i][j] -= damping * p;
        }
    }
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| m[x][col].abs().total_cmp(&m[y][col].abs())).unwrap();
        m.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = m[r][col] / m[col][col];
                for c in col..=n {
                    m[r][c] -= f * m[col][c];
                }
            }
        }
    }
    (0..n).map(|i| m[i][n] / m[i][i]).collect()
}

/// Random simple graph from a list of candidate pairs (used by proptest).
pub fn graph_from_pairs(n: usize, pairs: &[(usize, usize)]) -> Graph {
    Graph::from_edges(n, pairs.iter().map(|&(u, v)| (u % n, v % n)).filter(|(u, v)| u != v)).unwrap()
}

/// Asserts the adjacency structure is that of a simple undirected graph.
pub fn assert_simple(g: &Graph) {
    let mut count = 0;
    for u in 0..g.node_count() {
        let nb = g.neighbors(u);
        assert!(nb.windows(2).all(|w| w[0] < w[1]), "neighbour list of {u} not strictly sorted");
        for &v in nb {
            assert_ne!(u, v, "self-loop at {u}");
            assert!(g.neighbors(v).contains(&u), "asymmetric edge {u}-{v}");
        }
        count += nb.len();
    }
    assert_eq!(count, 2 * g.edge_count());
}
