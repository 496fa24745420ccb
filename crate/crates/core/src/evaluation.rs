//! Experiment execution, scoring and aggregation.
//!
//! One experiment run draws a hidden graph `H` (fresh per run for random
//! models, fixed for a loaded network), and for every error mechanism draws
//! an observed graph `O ~ phi(H)`. For each measure it records the true
//! sensitivity `s = rho(H, O)` and both estimates computed from `O` alone.
//!
//! Randomness is keyed by job, never by scheduling: the hidden graph of run
//! `r` uses stream `(HIDDEN, r)`, the observation of mechanism `phi` in run
//! `r` uses `(OBSERVED, r, kind, level)`, and the estimators use
//! `(ITERATIVE | IMPUTATION, r, kind, level)`. Runs execute in parallel on
//! the ambient rayon pool and results are collected in run order, so output
//! does not depend on the worker count.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::centrality::{CentralityMeasure, CentralityVector, Measure};
use crate::estimators::{estimate_many, Estimator};
use crate::graph::{barabasi_albert, erdos_renyi, read_edge_list, Graph, GraphError};
use crate::perturb::{apply_error, ErrorKind, ErrorMechanism};
use crate::rng::RngSeed;
use crate::sensitivity::classify_pairs;

pub const DEFAULT_RUNS: usize = 500;
pub const DEFAULT_THRESHOLD: f64 = 0.3;

const STREAM_HIDDEN: u64 = 1;
const STREAM_OBSERVED: u64 = 2;
const STREAM_ITERATIVE: u64 = 3;
const STREAM_IMPUTATION: u64 = 4;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid experiment: {0}")]
    InvalidSpec(String),
    #[error("cannot load network: {0}")]
    Load(Box<crate::Error>),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("records file line {line}: {reason}")]
    BadRecord { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// `|s - s_hat| / (1 - s)`, defined for `s < 1`.
pub fn weighted_error(s: f64, s_hat: f64) -> f64 {
    debug_assert!(s < 1.0, "weighted error needs s < 1");
    (s - s_hat).abs() / (1.0 - s)
}

/// Whether `s_hat` is an acceptable estimate of `s`.
///
/// For `s < 1` the weighted error must be at most `threshold`; for `s = 1`
/// only an exact hit counts.
pub fn success(s: f64, s_hat: f64, threshold: f64) -> bool {
    if s < 1.0 {
        weighted_error(s, s_hat) <= threshold
    } else {
        s_hat == 1.0
    }
}

/// Where hidden graphs come from.
#[derive(Debug, Clone)]
pub enum NetworkSource {
    ErdosRenyi { n: usize, p: f64 },
    BarabasiAlbert { n: usize, m: usize },
    /// Edge-list file; its largest connected component is used.
    EdgeList(PathBuf),
    /// A graph already in memory, used as is.
    Fixed { name: String, graph: Arc<Graph> },
}

impl NetworkSource {
    pub fn name(&self) -> String {
        match self {
            NetworkSource::ErdosRenyi { n, p } => format!("er_{n}_{p}"),
            NetworkSource::BarabasiAlbert { n, m } => format!("ba_{n}_{m}"),
            NetworkSource::EdgeList(path) => path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "edgelist".into()),
            NetworkSource::Fixed { name, .. } => name.clone(),
        }
    }

    fn validate(&self) -> Result<(), ExperimentError> {
        match *self {
            NetworkSource::ErdosRenyi { p, .. } if !(0.0..=1.0).contains(&p) => {
                Err(ExperimentError::InvalidSpec(format!("edge probability {p} outside [0, 1]")))
            }
            NetworkSource::BarabasiAlbert { n, m } if m == 0 || m >= n => {
                Err(ExperimentError::InvalidSpec(format!("need 1 <= m < n, got m = {m}, n = {n}")))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for NetworkSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NetworkSource::ErdosRenyi { n, p } => write!(f, "er:{n}:{p}"),
            NetworkSource::BarabasiAlbert { n, m } => write!(f, "ba:{n}:{m}"),
            NetworkSource::EdgeList(path) => write!(f, "edgelist:{}", path.display()),
            NetworkSource::Fixed { name, .. } => write!(f, "graph:{name}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub network: NetworkSource,
    pub mechanisms: Vec<ErrorMechanism>,
    pub measures: Vec<CentralityMeasure>,
    pub runs: usize,
    pub inner_samples: usize,
    pub threshold: f64,
    pub master_seed: u64,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.runs == 0 {
            return Err(ExperimentError::InvalidSpec("runs must be at least 1".into()));
        }
        if self.inner_samples == 0 {
            return Err(ExperimentError::InvalidSpec("inner_samples must be at least 1".into()));
        }
        if !(self.threshold > 0.0) {
            return Err(ExperimentError::InvalidSpec(format!("threshold must be positive, got {}", self.threshold)));
        }
        if self.mechanisms.is_empty() || self.measures.is_empty() {
            return Err(ExperimentError::InvalidSpec("need at least one mechanism and one measure".into()));
        }
        for m in &self.measures {
            m.validate().map_err(|e| ExperimentError::InvalidSpec(e.to_string()))?;
        }
        self.network.validate()
    }
}

/// Why part of a record is missing.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RecordFlags {
    /// The error mechanism could not be applied to `H`.
    pub error_infeasible: bool,
    pub s_undefined: bool,
    pub iter_infeasible: bool,
    pub iter_undefined: bool,
    pub imp_infeasible: bool,
    pub imp_undefined: bool,
}

impl RecordFlags {
    const NAMES: [&'static str; 6] = [
        "error_infeasible",
        "s_undefined",
        "iter_infeasible",
        "iter_undefined",
        "imp_infeasible",
        "imp_undefined",
    ];

    fn bits(&self) -> [bool; 6] {
        [
            self.error_infeasible,
            self.s_undefined,
            self.iter_infeasible,
            self.iter_undefined,
            self.imp_infeasible,
            self.imp_undefined,
        ]
    }

    fn parse(s: &str) -> Option<Self> {
        let mut f = Self::default();
        for tok in s.split('|').filter(|t| !t.is_empty()) {
            match tok {
                "error_infeasible" => f.error_infeasible = true,
                "s_undefined" => f.s_undefined = true,
                "iter_infeasible" => f.iter_infeasible = true,
                "iter_undefined" => f.iter_undefined = true,
                "imp_infeasible" => f.imp_infeasible = true,
                "imp_undefined" => f.imp_undefined = true,
                _ => return None,
            }
        }
        Some(f)
    }
}

impl fmt::Display for RecordFlags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self
            .bits()
            .iter()
            .zip(Self::NAMES)
            .filter(|(b, _)| **b)
            .map(|(_, n)| n)
            .collect();
        f.write_str(&names.join("|"))
    }
}

/// One (run, mechanism, measure) outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRecord {
    pub run_id: usize,
    pub network: String,
    pub mechanism: ErrorMechanism,
    pub measure: Measure,
    pub s: Option<f64>,
    pub s_hat_iter: Option<f64>,
    pub s_hat_imp: Option<f64>,
    pub success_iter: Option<bool>,
    pub success_imp: Option<bool>,
    pub flags: RecordFlags,
}

impl ExperimentRecord {
    fn new(
        run_id: usize,
        network: &str,
        mechanism: ErrorMechanism,
        measure: Measure,
        s: Option<f64>,
        s_hat_iter: Option<f64>,
        s_hat_imp: Option<f64>,
        threshold: f64,
        flags: RecordFlags,
    ) -> Self {
        let ok = |est: Option<f64>| s.zip(est).map(|(s, e)| success(s, e, threshold));
        Self {
            run_id,
            network: network.to_owned(),
            mechanism,
            measure,
            s,
            s_hat_iter,
            s_hat_imp,
            success_iter: ok(s_hat_iter),
            success_imp: ok(s_hat_imp),
            flags,
        }
    }

    pub fn werr_iter(&self) -> Option<f64> {
        Self::werr(self.s, self.s_hat_iter)
    }

    pub fn werr_imp(&self) -> Option<f64> {
        Self::werr(self.s, self.s_hat_imp)
    }

    fn werr(s: Option<f64>, est: Option<f64>) -> Option<f64> {
        match (s, est) {
            (Some(s), Some(e)) if s < 1.0 => Some(weighted_error(s, e)),
            _ => None,
        }
    }

    /// True when the true sensitivity and both estimates are defined.
    pub fn is_complete(&self) -> bool {
        self.s.is_some() && self.s_hat_iter.is_some() && self.s_hat_imp.is_some()
    }
}

/// Loads the hidden graph for a fixed source, `None` for random models.
fn fixed_hidden(source: &NetworkSource) -> Result<Option<Arc<Graph>>, ExperimentError> {
    match source {
        NetworkSource::EdgeList(path) => {
            let parsed = read_edge_list(path).map_err(|e| ExperimentError::Load(Box::new(e)))?;
            Ok(Some(Arc::new(parsed.graph.largest_connected_component())))
        }
        NetworkSource::Fixed { graph, .. } => Ok(Some(Arc::clone(graph))),
        _ => Ok(None),
    }
}

fn mechanism_key(phi: &ErrorMechanism) -> [u64; 2] {
    let kind = match phi.kind {
        ErrorKind::RemoveNodesUniform => 0,
        ErrorKind::RemoveEdgesUniform => 1,
        ErrorKind::RemoveEdgesProportional => 2,
        ErrorKind::AddEdgesUniform => 3,
    };
    [kind, phi.level().to_bits()]
}

/// Executes every run of `spec`. Runs are spread over the current rayon pool.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<ExperimentRecord>, ExperimentError> {
    spec.validate()?;
    let fixed = fixed_hidden(&spec.network)?;
    let fixed_centralities = fixed
        .as_ref()
        .map(|h| centralities(h, &spec.measures));
    let name = spec.network.name();
    let root = RngSeed::from_master(spec.master_seed);

    let per_run: Vec<Result<Vec<ExperimentRecord>, ExperimentError>> = (0..spec.runs)
        .into_par_iter()
        .map(|run| {
            let generated;
            let (hidden, hidden_c): (&Graph, Vec<Option<CentralityVector>>) = match &fixed {
                Some(h) => (h, fixed_centralities.clone().expect("computed with the graph")),
                None => {
                    let seed = root.child(&[STREAM_HIDDEN, run as u64]);
                    generated = match spec.network {
                        NetworkSource::ErdosRenyi { n, p } => erdos_renyi(n, p, seed)?,
                        NetworkSource::BarabasiAlbert { n, m } => barabasi_albert(n, m, seed)?,
                        _ => unreachable!("fixed sources handled above"),
                    };
                    let c = centralities(&generated, &spec.measures);
                    (&generated, c)
                }
            };
            let mut out = Vec::with_capacity(spec.mechanisms.len() * spec.measures.len());
            for phi in &spec.mechanisms {
                run_mechanism(spec, &name, root, run, hidden, &hidden_c, phi, &mut out);
            }
            Ok(out)
        })
        .collect();

    let mut records = Vec::with_capacity(spec.runs * spec.mechanisms.len() * spec.measures.len());
    for r in per_run {
        records.extend(r?);
    }
    Ok(records)
}

fn centralities(g: &Graph, measures: &[CentralityMeasure]) -> Vec<Option<CentralityVector>> {
    measures.iter().map(|m| m.compute(g).ok()).collect()
}

#[allow(clippy::too_many_arguments)]
fn run_mechanism(
    spec: &ExperimentSpec,
    network: &str,
    root: RngSeed,
    run: usize,
    hidden: &Graph,
    hidden_c: &[Option<CentralityVector>],
    phi: &ErrorMechanism,
    out: &mut Vec<ExperimentRecord>,
) {
    let key = mechanism_key(phi);
    let stream = |tag: u64| root.child(&[tag, run as u64, key[0], key[1]]);
    let record = |measure, s, it, imp, flags| {
        ExperimentRecord::new(run, network, *phi, measure, s, it, imp, spec.threshold, flags)
    };

    let observed = match apply_error(hidden, phi, stream(STREAM_OBSERVED)) {
        Ok(o) => o,
        Err(_) => {
            let flags = RecordFlags {
                error_infeasible: true,
                ..Default::default()
            };
            out.extend(spec.measures.iter().map(|m| record(m.kind, None, None, None, flags)));
            return;
        }
    };

    // estimators need a base vector per measure; measures that fail on O
    // (eigenvector on an edgeless graph) are estimated with a placeholder
    // and reported as undefined
    let observed_c = centralities(&observed, &spec.measures);
    let usable: Vec<usize> = (0..spec.measures.len()).filter(|&i| observed_c[i].is_some()).collect();
    let base: Vec<CentralityVector> = usable.iter().map(|&i| observed_c[i].clone().unwrap()).collect();
    let measures: Vec<CentralityMeasure> = usable.iter().map(|&i| spec.measures[i]).collect();
    let iter = estimate_many(&observed, &base, &measures, phi, Estimator::Iterative, spec.inner_samples, stream(STREAM_ITERATIVE));
    let imp = estimate_many(&observed, &base, &measures, phi, Estimator::Imputation, spec.inner_samples, stream(STREAM_IMPUTATION));

    for (i, m) in spec.measures.iter().enumerate() {
        let mut flags = RecordFlags::default();
        let s = match (&hidden_c[i], &observed_c[i]) {
            (Some(h), Some(o)) => classify_pairs(h, o).ok().and_then(|pc| pc.rho().ok()),
            _ => None,
        };
        flags.s_undefined = s.is_none();
        let slot = usable.iter().position(|&u| u == i);
        let unpack = |res: Option<&Result<crate::estimators::Estimate, crate::estimators::EstimateError>>,
                      infeasible: &mut bool,
                      undefined: &mut bool| match res {
            Some(Ok(e)) => Some(e.value),
            Some(Err(crate::estimators::EstimateError::Infeasible(_))) => {
                *infeasible = true;
                None
            }
            _ => {
                *undefined = true;
                None
            }
        };
        let it = unpack(slot.map(|k| &iter[k]), &mut flags.iter_infeasible, &mut flags.iter_undefined);
        let im = unpack(slot.map(|k| &imp[k]), &mut flags.imp_infeasible, &mut flags.imp_undefined);
        out.push(record(m.kind, s, it, im, flags));
    }
}

/// Summary of one (network, mechanism, measure) group.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub network: String,
    pub mechanism: ErrorMechanism,
    pub measure: Measure,
    pub runs: usize,
    /// Records lacking `s` or either estimate.
    pub excluded_runs: usize,
    pub mean_s: f64,
    pub p95_abs_err_imp: f64,
    pub p95_abs_err_iter: f64,
    pub success_rate_imp: f64,
    pub success_rate_iter: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Aggregates {
    pub rows: Vec<AggregateRow>,
    /// Groups without a single complete record, as `network/mechanism/measure`.
    pub omitted: Vec<String>,
}

type GroupKey = (String, ErrorKind, u64, Measure);

/// Groups records and summarises each group over its complete records.
///
/// Output order is sorted by group key and every statistic is computed from
/// sorted values, so the result does not depend on record order.
pub fn aggregate(records: &[ExperimentRecord]) -> Aggregates {
    let mut groups: BTreeMap<GroupKey, Vec<&ExperimentRecord>> = BTreeMap::new();
    for r in records {
        let key = (r.network.clone(), r.mechanism.kind, r.mechanism.level().to_bits(), r.measure);
        groups.entry(key).or_default().push(r);
    }
    let mut out = Aggregates::default();
    for ((network, _, _, measure), rs) in groups {
        let mechanism = rs[0].mechanism;
        let complete: Vec<&ExperimentRecord> = rs.iter().copied().filter(|r| r.is_complete()).collect();
        if complete.is_empty() {
            out.omitted.push(format!("{network}/{mechanism}/{measure}"));
            continue;
        }
        let n = complete.len() as f64;
        let mut s: Vec<f64> = complete.iter().map(|r| r.s.unwrap()).collect();
        let mut err_imp: Vec<f64> = complete.iter().map(|r| (r.s.unwrap() - r.s_hat_imp.unwrap()).abs()).collect();
        let mut err_iter: Vec<f64> = complete.iter().map(|r| (r.s.unwrap() - r.s_hat_iter.unwrap()).abs()).collect();
        s.sort_by(f64::total_cmp);
        err_imp.sort_by(f64::total_cmp);
        err_iter.sort_by(f64::total_cmp);
        let ok_imp = complete.iter().filter(|r| r.success_imp == Some(true)).count();
        let ok_iter = complete.iter().filter(|r| r.success_iter == Some(true)).count();
        out.rows.push(AggregateRow {
            network,
            mechanism,
            measure,
            runs: rs.len(),
            excluded_runs: rs.len() - complete.len(),
            mean_s: s.iter().sum::<f64>() / n,
            p95_abs_err_imp: nearest_rank(&err_imp, 0.95),
            p95_abs_err_iter: nearest_rank(&err_iter, 0.95),
            success_rate_imp: ok_imp as f64 / n,
            success_rate_iter: ok_iter as f64 / n,
        });
    }
    out
}

/// The `ceil(q * N)`-th smallest value of a sorted, non-empty slice.
pub fn nearest_rank(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty());
    let rank = (q * sorted.len() as f64).ceil().max(1.0) as usize;
    sorted[rank.min(sorted.len()) - 1]
}

pub const RECORDS_HEADER: &str =
    "run_id,network,mechanism,level,centrality,s,s_hat_iter,s_hat_imp,werr_iter,werr_imp,success_iter,success_imp,flags";

pub const AGGREGATES_HEADER: &str = "network,mechanism,level,centrality,runs,excluded_runs,mean_s,p95_abs_err_imp,p95_abs_err_iter,success_rate_imp,success_rate_iter";

fn opt_f64(x: Option<f64>) -> String {
    x.map_or_else(|| "NA".into(), |v| v.to_string())
}

fn opt_bool(x: Option<bool>) -> &'static str {
    match x {
        Some(true) => "1",
        Some(false) => "0",
        None => "NA",
    }
}

pub fn write_records<W: Write>(records: &[ExperimentRecord], mut out: W) -> io::Result<()> {
    writeln!(out, "{RECORDS_HEADER}")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.run_id,
            r.network,
            r.mechanism.kind.token(),
            r.mechanism.level(),
            r.measure,
            opt_f64(r.s),
            opt_f64(r.s_hat_iter),
            opt_f64(r.s_hat_imp),
            opt_f64(r.werr_iter()),
            opt_f64(r.werr_imp()),
            opt_bool(r.success_iter),
            opt_bool(r.success_imp),
            r.flags,
        )?;
    }
    out.flush()
}

pub fn write_aggregates<W: Write>(rows: &[AggregateRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{AGGREGATES_HEADER}")?;
    for a in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            a.network,
            a.mechanism.kind.token(),
            a.mechanism.level(),
            a.measure,
            a.runs,
            a.excluded_runs,
            a.mean_s,
            a.p95_abs_err_imp,
            a.p95_abs_err_iter,
            a.success_rate_imp,
            a.success_rate_iter,
        )?;
    }
    out.flush()
}

/// Parses a records CSV written by [`write_records`]. The stored success
/// bits are kept as written.
pub fn read_records<R: BufRead>(input: R) -> Result<Vec<ExperimentRecord>, ExperimentError> {
    let mut records = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        if idx == 0 {
            if line.trim() != RECORDS_HEADER {
                return Err(ExperimentError::BadRecord {
                    line: 1,
                    reason: "unexpected header".into(),
                });
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let bad = |reason: &str| ExperimentError::BadRecord {
            line: lineno,
            reason: reason.to_owned(),
        };
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 13 {
            return Err(bad("expected 13 columns"));
        }
        let f = |s: &str| -> Result<Option<f64>, ExperimentError> {
            if s == "NA" {
                Ok(None)
            } else {
                s.parse().map(Some).map_err(|_| bad("bad number"))
            }
        };
        let b = |s: &str| -> Result<Option<bool>, ExperimentError> {
            match s {
                "1" => Ok(Some(true)),
                "0" => Ok(Some(false)),
                "NA" => Ok(None),
                _ => Err(bad("bad success bit")),
            }
        };
        let mechanism: ErrorMechanism = format!("{}:{}", cols[2], cols[3])
            .parse()
            .map_err(|_| bad("bad mechanism"))?;
        records.push(ExperimentRecord {
            run_id: cols[0].parse().map_err(|_| bad("bad run id"))?,
            network: cols[1].to_owned(),
            mechanism,
            measure: cols[4].parse().map_err(|_| bad("bad centrality"))?,
            s: f(cols[5])?,
            s_hat_iter: f(cols[6])?,
            s_hat_imp: f(cols[7])?,
            success_iter: b(cols[10])?,
            success_imp: b(cols[11])?,
            flags: RecordFlags::parse(cols[12]).ok_or_else(|| bad("bad flags"))?,
        });
    }
    Ok(records)
}
