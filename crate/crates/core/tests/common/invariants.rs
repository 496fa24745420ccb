//! Invariants shared by the property tests and the acceptance suite. Each
//! check panics on violation; randomised checks use a fixed proptest seed.

use std::collections::HashMap;

use netsens::evaluation::{aggregate, success, weighted_error, ExperimentRecord, RecordFlags};
use netsens::graph::{barabasi_albert, erdos_renyi, parse_edge_list, write_edge_list};
use netsens::sensitivity::classify_aligned;
use netsens::{
    apply_error, apply_imputation, classify_pairs, imputation_estimate, invert_error, iterative_estimate, sensitivity,
    CentralityMeasure, CentralityVector, ErrorKind, ErrorMechanism, EstimatorConfig, Graph, Measure, RngSeed,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRng, TestRunner};

use super::*;

/// Every invariant by name.
pub const ALL: &[(&str, fn())] = &[
    ("classification matches brute force", classification_matches_brute_force),
    ("sensitivity is symmetric", sensitivity_is_symmetric),
    ("monotone transforms leave classification unchanged", monotone_transforms_change_nothing),
    ("tie-free vector against itself gives 1", tie_free_vector_against_itself_is_one),
    ("nodes in one vector only change nothing", nodes_in_one_vector_only_change_nothing),
    ("relabeling permutes scores", relabeling_permutes_scores),
    ("degree sum and pagerank mass", degree_sum_and_pagerank_mass),
    ("eigenvector residual below 10 tol", eigenvector_residual_is_small),
    ("vertex-transitive graphs tie everywhere", vertex_transitive_graphs_tie_everywhere),
    ("generators simple and deterministic", generators_are_simple_and_deterministic),
    ("erdos-renyi edge count is binomial", erdos_renyi_edge_count_is_binomial),
    ("edge-list round trip", edge_list_round_trip),
    ("perturbations keep graphs simple", perturbations_keep_graphs_simple),
    ("perturbation is deterministic", perturbation_is_deterministic),
    ("uniform edge survival is one half", uniform_edge_survival_is_one_half),
    ("example outcomes are uniform", example_outcomes_are_uniform),
    ("imputation restores edge count", imputation_restores_edge_count),
    ("estimates in [0, 1], exact at level 0", estimates_lie_in_unit_interval),
    ("monte carlo converges to enumeration", monte_carlo_converges_to_enumeration),
    ("iterative estimate converges to enumeration", iterative_estimate_converges_to_enumeration),
    ("weighted error scales linearly", weighted_error_scales),
    ("success is monotone", success_is_monotone),
    ("aggregate ignores record order", aggregate_ignores_record_order),
];

fn check<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    let rng = TestRng::deterministic_rng(config.rng_algorithm);
    let mut runner = TestRunner::new_with_rng(config, rng);
    if let Err(e) = runner.run(&strategy, test) {
        panic!("{e}");
    }
}

/// Score vectors with plenty of ties: small integer values.
fn tied_scores(len: std::ops::Range<usize>) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    len.prop_flat_map(|n| {
        (
            prop::collection::vec((0u8..6).prop_map(f64::from), n),
            prop::collection::vec((0u8..6).prop_map(f64::from), n),
        )
    })
}

fn small_graph() -> impl Strategy<Value = Graph> {
    (4usize..18).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 0..3 * n).prop_map(move |pairs| graph_from_pairs(n, &pairs))
    })
}

fn mechanism() -> impl Strategy<Value = ErrorMechanism> {
    (0usize..4, prop::sample::select(vec![0.0, 0.1, 0.3, 0.5])).prop_map(|(k, a)| {
        let tok = ["rm_nodes", "rm_edges_unif", "rm_edges_prop", "add_edges"][k];
        format!("{tok}:{a}").parse().unwrap()
    })
}

fn shuffle<T>(v: &mut [T], seed: u64) {
    let mut state = seed;
    for i in (1..v.len()).rev() {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        v.swap(i, (state >> 33) as usize % (i + 1));
    }
}

pub fn classification_matches_brute_force() {
    check(500, tied_scores(3..51), |(xs, ys)| {
        let pc = classify_aligned(&xs, &ys).unwrap();
        prop_assert_eq!((pc.concordant, pc.discordant, pc.ties), brute_force_pairs(&xs, &ys));
        if let Ok(rho) = pc.rho() {
            prop_assert!((0.0..=1.0).contains(&rho));
            prop_assert!((rho - (pc.gamma().unwrap() + 1.0) / 2.0).abs() < 1e-12);
        }
        Ok(())
    });
}

pub fn sensitivity_is_symmetric() {
    check(300, tied_scores(2..40), |(xs, ys)| {
        prop_assert_eq!(classify_aligned(&xs, &ys).unwrap(), classify_aligned(&ys, &xs).unwrap());
        Ok(())
    });
}

pub fn monotone_transforms_change_nothing() {
    check(300, tied_scores(2..40), |(xs, ys)| {
        let base = classify_aligned(&xs, &ys).unwrap();
        let fx: Vec<f64> = xs.iter().map(|x| (x + 1.0).powi(3) - 4.0).collect();
        let gy: Vec<f64> = ys.iter().map(|y| 10.0 * y + 0.5).collect();
        prop_assert_eq!(classify_aligned(&fx, &gy).unwrap(), base);
        prop_assert_eq!(classify_aligned(&xs, &gy).unwrap(), base);
        Ok(())
    });
}

pub fn tie_free_vector_against_itself_is_one() {
    check(200, prop::collection::hash_set(-1000i32..1000, 2..40), |xs| {
        let xs: Vec<f64> = xs.into_iter().map(f64::from).collect();
        prop_assert_eq!(classify_aligned(&xs, &xs).unwrap().rho().unwrap(), 1.0);
        Ok(())
    });
}

pub fn nodes_in_one_vector_only_change_nothing() {
    let extra = prop::collection::vec(0.0f64..9.0, 0..10);
    check(200, (tied_scores(2..30), extra), |((xs, ys), extra)| {
        let names: Vec<String> = (0..xs.len()).map(|i| format!("n{i}")).collect();
        let a = CentralityVector::from_named_scores(Measure::Degree, names.clone(), xs.clone());
        let mut b_names = names;
        let mut b_scores = ys.clone();
        for (i, x) in extra.iter().enumerate() {
            b_names.insert(0, format!("only_b{i}"));
            b_scores.insert(0, *x);
        }
        let b = CentralityVector::from_named_scores(Measure::Degree, b_names, b_scores);
        prop_assert_eq!(classify_pairs(&a, &b).unwrap(), classify_aligned(&xs, &ys).unwrap());
        Ok(())
    });
}

pub fn relabeling_permutes_scores() {
    check(200, (small_graph(), any::<u64>()), |(g, seed)| {
        let n = g.node_count();
        let mut perm: Vec<usize> = (0..n).collect();
        shuffle(&mut perm, seed);
        let pg = Graph::from_edges(n, g.edges().map(|(u, v)| (perm[u], perm[v]))).unwrap();
        for m in Measure::ALL {
            let cm = CentralityMeasure::new(m);
            let (Ok(a), Ok(b)) = (cm.compute(&g), cm.compute(&pg)) else {
                prop_assert_eq!(g.edge_count(), 0);
                continue;
            };
            for u in 0..n {
                prop_assert!((a.scores[u] - b.scores[perm[u]]).abs() < 1e-9, "{} node {}", m, u);
            }
        }
        Ok(())
    });
}

pub fn degree_sum_and_pagerank_mass() {
    check(200, small_graph(), |g| {
        let deg = CentralityMeasure::new(Measure::Degree).compute(&g).unwrap();
        prop_assert_eq!(deg.scores.iter().sum::<f64>(), 2.0 * g.edge_count() as f64);
        let pr = CentralityMeasure::new(Measure::PageRank).compute(&g).unwrap();
        prop_assert!((pr.scores.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        Ok(())
    });
}

pub fn eigenvector_residual_is_small() {
    check(200, small_graph(), |g| {
        let g = g.largest_connected_component();
        if g.edge_count() == 0 {
            return Ok(());
        }
        let cm = CentralityMeasure::new(Measure::Eigenvector);
        let x = cm.compute(&g).unwrap();
        prop_assert!(x.converged);
        let ax: Vec<f64> = (0..g.node_count()).map(|u| g.neighbors(u).iter().map(|&v| x.scores[v]).sum()).collect();
        let top = (0..x.scores.len()).max_by(|&i, &j| x.scores[i].total_cmp(&x.scores[j])).unwrap();
        let lambda = ax[top] / x.scores[top];
        let residual = ax.iter().zip(&x.scores).map(|(a, s)| (a - lambda * s).abs()).fold(0.0, f64::max);
        prop_assert!(residual < 10.0 * cm.tolerance, "residual {}", residual);
        Ok(())
    });
}

pub fn vertex_transitive_graphs_tie_everywhere() {
    let cycle = |n: usize| graph(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>());
    let complete = |n: usize| {
        let e: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        graph(n, &e)
    };
    for g in [cycle(5), cycle(12), complete(4), complete(9)] {
        for m in Measure::ALL {
            let s = CentralityMeasure::new(m).compute(&g).unwrap().scores;
            let (lo, hi) = s.iter().fold((f64::MAX, f64::MIN), |(l, h), &x| (l.min(x), h.max(x)));
            assert!(hi - lo < 1e-9, "{m} on {} nodes: spread {}", g.node_count(), hi - lo);
        }
    }
}

pub fn generators_are_simple_and_deterministic() {
    check(40, (5usize..60, 0.0f64..1.0, 1usize..5, any::<u64>()), |(n, p, m, seed)| {
        let s = RngSeed::from_master(seed);
        let er = erdos_renyi(n, p, s).unwrap();
        assert_simple(&er);
        prop_assert_eq!(&er, &erdos_renyi(n, p, s).unwrap());
        let ba = barabasi_albert(n, m, s).unwrap();
        assert_simple(&ba);
        prop_assert_eq!(&ba, &barabasi_albert(n, m, s).unwrap());
        let degree_sum: usize = (0..n).map(|u| ba.degree(u)).sum();
        prop_assert_eq!(degree_sum, 2 * (m * (m - 1) / 2 + (n - m) * m));
        prop_assert_eq!(ba.connected_components().len(), 1);
        Ok(())
    });
    assert_eq!(barabasi_albert(100, 11, RngSeed::from_master(1)).unwrap().edge_count(), 1034);
}

pub fn erdos_renyi_edge_count_is_binomial() {
    let samples = 500;
    let counts: Vec<f64> = (0..samples)
        .map(|s| erdos_renyi(100, 0.2, RngSeed::new(s, 0)).unwrap().edge_count() as f64)
        .collect();
    let mean = counts.iter().sum::<f64>() / samples as f64;
    let se = (4950.0f64 * 0.2 * 0.8).sqrt() / (samples as f64).sqrt();
    assert!((mean - 990.0).abs() < 3.0 * se, "mean {mean}");
}

pub fn edge_list_round_trip() {
    check(200, small_graph(), |g| {
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        let parsed = parse_edge_list(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_simple(&parsed.graph);
        prop_assert_eq!(parsed.graph.node_count(), g.node_count());
        prop_assert_eq!(parsed.graph.edge_count(), g.edge_count());
        let idx = parsed.graph.name_index();
        for (u, v) in g.edges() {
            prop_assert!(parsed.graph.has_edge(idx[&u.to_string()], idx[&v.to_string()]));
        }
        Ok(())
    });
}

pub fn perturbations_keep_graphs_simple() {
    check(300, (small_graph(), mechanism(), any::<u64>()), |(g, phi, seed)| {
        let Ok(o) = apply_error(&g, &phi, RngSeed::from_master(seed)) else {
            return Ok(());
        };
        assert_simple(&o);
        if phi.kind == ErrorKind::AddEdgesUniform {
            let k = (phi.level() * g.edge_count() as f64 + 0.5 + 1e-9).floor() as usize;
            prop_assert_eq!(o.node_count(), g.node_count());
            prop_assert_eq!(o.edge_count(), g.edge_count() + k);
            prop_assert!(g.edges().all(|(u, v)| o.has_edge(u, v)));
        } else {
            prop_assert!(o.node_count() <= g.node_count());
            prop_assert!(o.edge_count() <= g.edge_count());
        }
        if phi.level() == 0.0 {
            prop_assert_eq!(o.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
        }
        Ok(())
    });
}

pub fn perturbation_is_deterministic() {
    check(200, (small_graph(), mechanism(), any::<u64>()), |(g, phi, seed)| {
        let a = apply_error(&g, &phi, RngSeed::from_master(seed));
        prop_assert_eq!(a, apply_error(&g, &phi, RngSeed::from_master(seed)));
        Ok(())
    });
}

pub fn estimates_lie_in_unit_interval() {
    check(40, (any::<u64>(), mechanism()), |(seed, phi)| {
        let g = erdos_renyi(20, 0.3, RngSeed::from_master(seed)).unwrap();
        for m in [Measure::Degree, Measure::Betweenness] {
            let cfg = EstimatorConfig {
                inner_samples: 5,
                seed: RngSeed::new(seed, 1),
                measure: m.into(),
            };
            for est in [iterative_estimate(&g, &phi, &cfg), imputation_estimate(&g, &phi, &cfg)] {
                if let Ok(e) = est {
                    prop_assert!((0.0..=1.0).contains(&e.value));
                    if phi.level() == 0.0 {
                        prop_assert_eq!(e.value, 1.0);
                    }
                }
            }
            prop_assert_eq!(iterative_estimate(&g, &phi, &cfg), iterative_estimate(&g, &phi, &cfg));
        }
        Ok(())
    });
}

pub fn weighted_error_scales() {
    check(300, (0.0f64..0.99, 0.0f64..0.3), |(s, d)| {
        let e = weighted_error(s, s + d);
        prop_assert!((e - d / (1.0 - s)).abs() < 1e-12);
        prop_assert!((weighted_error(s, s + 2.0 * d) - 2.0 * e).abs() < 1e-9);
        Ok(())
    });
}

pub fn success_is_monotone() {
    let unit = || 0.01f64..1.0;
    check(500, (0.0f64..1.0, 0.0f64..0.5, 0.0f64..0.5, unit(), unit()), |(s, d1, d2, t1, t2)| {
        let (dl, dh) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
        let (tl, th) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        if success(s, s + dh, tl) {
            prop_assert!(success(s, s + dl, tl));
        }
        if success(s, s + dl, tl) {
            prop_assert!(success(s, s + dl, th));
        }
        Ok(())
    });
}

pub fn aggregate_ignores_record_order() {
    let values = prop::collection::vec((0.5f64..1.0, 0.4f64..1.0, 0.4f64..1.0, 0usize..3), 1..40);
    check(200, (values, any::<u64>()), |(values, seed)| {
        let mechs: Vec<ErrorMechanism> =
            ["rm_nodes:0.1", "add_edges:0.3", "rm_edges_prop:0.1"].iter().map(|t| t.parse().unwrap()).collect();
        let records: Vec<ExperimentRecord> = values
            .iter()
            .enumerate()
            .map(|(i, &(s, it, im, k))| ExperimentRecord {
                run_id: i,
                network: "net".into(),
                mechanism: mechs[k],
                measure: Measure::PageRank,
                s: Some(s),
                s_hat_iter: Some(it),
                s_hat_imp: Some(im),
                success_iter: Some(success(s, it, 0.3)),
                success_imp: Some(success(s, im, 0.3)),
                flags: RecordFlags::default(),
            })
            .collect();
        let mut shuffled = records.clone();
        shuffle(&mut shuffled, seed);
        prop_assert_eq!(aggregate(&records), aggregate(&shuffled));
        Ok(())
    });
}

/// The six two-edge subgraphs of the example graph, keyed by their edge set.
pub fn example_outcomes() -> Vec<Vec<(usize, usize)>> {
    let e: Vec<_> = example_hidden().edges().collect();
    let mut out = Vec::new();
    for i in 0..e.len() {
        for j in i + 1..e.len() {
            out.push(vec![e[i], e[j]]);
        }
    }
    out
}

pub fn example_outcomes_are_uniform() {
    let h = example_hidden();
    let phi: ErrorMechanism = "rm_edges_unif:0.5".parse().unwrap();
    let outcomes = example_outcomes();
    assert_eq!(outcomes.len(), 6);
    let draws = 6000;
    let mut counts: HashMap<Vec<(usize, usize)>, usize> = HashMap::new();
    for i in 0..draws {
        let o = apply_error(&h, &phi, RngSeed::new(11, i)).unwrap();
        *counts.entry(o.edges().collect()).or_default() += 1;
    }
    assert_eq!(counts.len(), 6);
    let p = 1.0 / 6.0;
    let se = (p * (1.0 - p) / draws as f64).sqrt();
    for o in &outcomes {
        let freq = counts[o] as f64 / draws as f64;
        assert!((freq - p).abs() < 3.0 * se, "outcome {o:?} frequency {freq}");
    }
}

pub fn monte_carlo_converges_to_enumeration() {
    // expectation of rho(H, G) over the six equally likely outcomes versus
    // the sample mean over seeded draws, for every measure with a defined value
    let h = example_hidden();
    let phi: ErrorMechanism = "rm_edges_unif:0.5".parse().unwrap();
    for m in Measure::ALL {
        let cm = CentralityMeasure::new(m);
        let ch = cm.compute(&h).unwrap();
        let rho = |g: &Graph| cm.compute(g).ok().and_then(|c| sensitivity(&ch, &c).ok());
        let exact: Vec<f64> = example_outcomes().iter().filter_map(|e| rho(&graph(5, e))).collect();
        if exact.len() < 6 {
            continue;
        }
        let mean = exact.iter().sum::<f64>() / 6.0;
        let var = exact.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / 6.0;
        let draws = 6000;
        let sample: f64 = (0..draws)
            .map(|i| rho(&apply_error(&h, &phi, RngSeed::new(5, i)).unwrap()).unwrap())
            .sum::<f64>()
            / draws as f64;
        let se = (var / draws as f64).sqrt();
        assert!((sample - mean).abs() <= 3.0 * se + 1e-12, "{m}: {sample} vs {mean} (se {se})");
    }
}

pub fn iterative_estimate_converges_to_enumeration() {
    // O = the example graph H itself; the iterative estimate is the exact
    // expectation of rho(O, phi(O)) over the same six outcomes
    let o = example_hidden();
    let phi: ErrorMechanism = "rm_edges_unif:0.5".parse().unwrap();
    let cm = CentralityMeasure::new(Measure::PageRank);
    let co = cm.compute(&o).unwrap();
    let exact: Vec<f64> = example_outcomes()
        .iter()
        .map(|e| sensitivity(&co, &cm.compute(&graph(5, e)).unwrap()).unwrap())
        .collect();
    let mean = exact.iter().sum::<f64>() / 6.0;
    let cfg = EstimatorConfig {
        inner_samples: 6000,
        seed: RngSeed::new(3, 0),
        measure: cm,
    };
    let est = iterative_estimate(&o, &phi, &cfg).unwrap();
    assert!((est.value - mean).abs() <= 3.0 * est.std_error, "{} vs {mean}", est.value);
}

pub fn uniform_edge_survival_is_one_half() {
    // fixed 20-edge circulant graph, half the edges removed per draw
    let edges: Vec<_> = (0..10).flat_map(|i| [(i, (i + 1) % 10), (i, (i + 3) % 10)]).collect();
    let g = graph(10, &edges);
    assert_eq!(g.edge_count(), 20);
    let phi: ErrorMechanism = "rm_edges_unif:0.5".parse().unwrap();
    let draws = 2000;
    let mut survived: HashMap<(usize, usize), usize> = HashMap::new();
    for i in 0..draws {
        for e in apply_error(&g, &phi, RngSeed::new(21, i)).unwrap().edges() {
            *survived.entry(e).or_default() += 1;
        }
    }
    let se = (0.25 / draws as f64).sqrt();
    for e in g.edges() {
        let f = survived.get(&e).copied().unwrap_or(0) as f64 / draws as f64;
        assert!((f - 0.5).abs() < 3.0 * se, "edge {e:?} survived {f}");
    }
}

pub fn imputation_restores_edge_count() {
    for (seed, tok) in [(0, "rm_edges_unif:0.1"), (1, "rm_edges_unif:0.3"), (2, "rm_edges_prop:0.3"), (3, "add_edges:0.3")] {
        let g = erdos_renyi(60, 0.1, RngSeed::new(seed, 0)).unwrap();
        let phi: ErrorMechanism = tok.parse().unwrap();
        let o = apply_error(&g, &phi, RngSeed::new(seed, 1)).unwrap();
        let psi = invert_error(&phi, &o);
        let back = apply_imputation(&o, &psi, RngSeed::new(seed, 2)).unwrap();
        let diff = back.edge_count().abs_diff(g.edge_count());
        assert!(diff <= 1, "{tok}: {} vs {}", back.edge_count(), g.edge_count());
    }
}
