//! C ABI over `netsens`.
//!
//! Graphs are opaque heap handles released with [`ns_graph_free`]. Every
//! fallible call returns an [`NsStatus`]; on failure a message is kept per
//! thread and can be read with [`ns_last_error_message`]. Output pointers are
//! written only on success. Panics are caught at the boundary and reported as
//! [`NsStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fs::File;
use std::io::BufWriter;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use netsens::graph::{barabasi_albert, erdos_renyi, read_edge_list, write_edge_list, Graph, GraphError};
use netsens::{
    classify_pairs, imputation_estimate, iterative_estimate, CentralityMeasure, Estimate, EstimateError,
    EstimatorConfig, Measure, PerturbError, RngSeed, SensitivityError,
};

/// Opaque graph handle.
pub struct NsGraph(Graph);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Infeasible = 3,
    Io = 4,
    /// The requested quantity is undefined, e.g. every pair is tied.
    Undefined = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NsEstimator {
    Iterative = 0,
    Imputation = 1,
}

/// Pair counts behind a sensitivity value.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NsPairCounts {
    pub concordant: u64,
    pub discordant: u64,
    pub ties: u64,
    pub compared_nodes: u64,
}

/// A Monte-Carlo estimate.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NsEstimate {
    pub value: f64,
    pub std_error: f64,
    pub defined_draws: u64,
    pub undefined_draws: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(NsStatus, String);

type Outcome<T> = Result<T, Failure>;

fn fail<T>(status: NsStatus, msg: impl Into<String>) -> Outcome<T> {
    Err(Failure(status, msg.into()))
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        let status = match e {
            GraphError::NotEnoughNonEdges { .. } => NsStatus::Infeasible,
            _ => NsStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

impl From<PerturbError> for Failure {
    fn from(e: PerturbError) -> Self {
        let status = match e {
            PerturbError::RemovalExceedsPopulation { .. } | PerturbError::Graph(GraphError::NotEnoughNonEdges { .. }) => {
                NsStatus::Infeasible
            }
            _ => NsStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

impl From<EstimateError> for Failure {
    fn from(e: EstimateError) -> Self {
        match e {
            EstimateError::Infeasible(p) => p.into(),
            EstimateError::AllUndefined(_) => Failure(NsStatus::Undefined, e.to_string()),
            _ => Failure(NsStatus::InvalidArgument, e.to_string()),
        }
    }
}

impl From<SensitivityError> for Failure {
    fn from(e: SensitivityError) -> Self {
        let status = match e {
            SensitivityError::Undefined => NsStatus::Undefined,
            SensitivityError::TooFewCommonNodes(_) => NsStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

impl From<netsens::Error> for Failure {
    fn from(e: netsens::Error) -> Self {
        match e {
            netsens::Error::Io(e) => Failure(NsStatus::Io, e.to_string()),
            other => Failure(NsStatus::InvalidArgument, other.to_string()),
        }
    }
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Outcome<()>) -> NsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => NsStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            NsStatus::Panic
        }
    }
}

unsafe fn graph_ref<'a>(g: *const NsGraph) -> Outcome<&'a Graph> {
    match g.as_ref() {
        Some(h) => Ok(&h.0),
        None => fail(NsStatus::NullPointer, "graph handle is null"),
    }
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &str) -> Outcome<&'a mut T> {
    match p.as_mut() {
        Some(r) => Ok(r),
        None => fail(NsStatus::NullPointer, format!("{what} is null")),
    }
}

unsafe fn string_arg<'a>(s: *const c_char, what: &str) -> Outcome<&'a str> {
    if s.is_null() {
        return fail(NsStatus::NullPointer, format!("{what} is null"));
    }
    CStr::from_ptr(s)
        .to_str()
        .or_else(|_| fail(NsStatus::InvalidArgument, format!("{what} is not valid UTF-8")))
}

fn measure(token: &str) -> Outcome<CentralityMeasure> {
    token
        .parse::<Measure>()
        .map(CentralityMeasure::from)
        .or_else(|e| fail(NsStatus::InvalidArgument, e.to_string()))
}

fn give(out: &mut *mut NsGraph, g: Graph) {
    *out = Box::into_raw(Box::new(NsGraph(g)));
}

/// Message of the last failed call on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ns_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds a graph on `n` nodes from `m` edges stored as `2 * m` consecutive
/// endpoints. Duplicates and self-loops are dropped.
///
/// # Safety
/// `edges` must point to `2 * m` readable values (it may be NULL when `m` is
/// 0); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ns_graph_from_edges(n: usize, edges: *const usize, m: usize, out: *mut *mut NsGraph) -> NsStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let flat: &[usize] = if m == 0 {
            &[]
        } else if edges.is_null() {
            return fail(NsStatus::NullPointer, "edges is null");
        } else {
            std::slice::from_raw_parts(edges, 2 * m)
        };
        let g = Graph::from_edges(n, flat.chunks_exact(2).map(|e| (e[0], e[1])))?;
        give(out, g);
        Ok(())
    })
}

/// Reads an edge-list file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ns_graph_read(path: *const c_char, out: *mut *mut NsGraph) -> NsStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let path = string_arg(path, "path")?;
        give(out, read_edge_list(path)?.graph);
        Ok(())
    })
}

/// Writes `g` as an edge list.
///
/// # Safety
/// `g` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn ns_graph_write(g: *const NsGraph, path: *const c_char) -> NsStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let path = string_arg(path, "path")?;
        let file = File::create(path).or_else(|e| fail(NsStatus::Io, format!("{path}: {e}")))?;
        write_edge_list(g, BufWriter::new(file)).or_else(|e| fail(NsStatus::Io, e.to_string()))
    })
}

/// Erdős–Rényi `G(n, p)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ns_graph_erdos_renyi(n: usize, p: f64, seed: u64, out: *mut *mut NsGraph) -> NsStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        give(out, erdos_renyi(n, p, RngSeed::from_master(seed))?);
        Ok(())
    })
}

/// Barabási–Albert graph with `m` edges per new node.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ns_graph_barabasi_albert(n: usize, m: usize, seed: u64, out: *mut *mut NsGraph) -> NsStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        give(out, barabasi_albert(n, m, RngSeed::from_master(seed))?);
        Ok(())
    })
}

/// Releases a graph. NULL is ignored.
///
/// # Safety
/// `g` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ns_graph_free(g: *mut NsGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Node count, 0 for NULL.
///
/// # Safety
/// `g` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ns_graph_node_count(g: *const NsGraph) -> usize {
    g.as_ref().map_or(0, |h| h.0.node_count())
}

/// Edge count, 0 for NULL.
///
/// # Safety
/// `g` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ns_graph_edge_count(g: *const NsGraph) -> usize {
    g.as_ref().map_or(0, |h| h.0.edge_count())
}

/// Largest connected component as a new graph.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ns_graph_largest_component(g: *const NsGraph, out: *mut *mut NsGraph) -> NsStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let out = out_ptr(out, "out")?;
        give(out, g.largest_connected_component());
        Ok(())
    })
}

/// Applies one draw of an error mechanism given as a token such as
/// `rm_edges_unif:0.1`.
///
/// # Safety
/// `g` must be a live handle, `mechanism` a NUL-terminated string and `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn ns_graph_perturb(
    g: *const NsGraph,
    mechanism: *const c_char,
    seed: u64,
    out: *mut *mut NsGraph,
) -> NsStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let phi = string_arg(mechanism, "mechanism")?.parse()?;
        let out = out_ptr(out, "out")?;
        give(out, netsens::apply_error(g, &phi, RngSeed::from_master(seed))?);
        Ok(())
    })
}

/// Writes one score per node into `scores`, which must hold at least
/// `ns_graph_node_count(g)` values. `measure` is one of bc, cc, dc, ec, pr.
///
/// # Safety
/// `g` must be a live handle, `measure` a NUL-terminated string and `scores`
/// writable for `len` values.
#[no_mangle]
pub unsafe extern "C" fn ns_centrality(
    g: *const NsGraph,
    measure_token: *const c_char,
    scores: *mut f64,
    len: usize,
) -> NsStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let m = measure(string_arg(measure_token, "measure")?)?;
        if scores.is_null() {
            return fail(NsStatus::NullPointer, "scores is null");
        }
        if len < g.node_count() {
            return fail(
                NsStatus::BufferTooSmall,
                format!("need room for {} scores, got {len}", g.node_count()),
            );
        }
        let c = m.compute(g).or_else(|e| fail(NsStatus::Undefined, e.to_string()))?;
        std::slice::from_raw_parts_mut(scores, c.scores.len()).copy_from_slice(&c.scores);
        Ok(())
    })
}

/// Sensitivity of the `measure` ranking between `a` and `b`, compared on
/// common node names. `counts` may be NULL. When every pair is tied the call
/// returns `Undefined` but still fills `counts`.
///
/// # Safety
/// `a`, `b` must be live handles, `measure` a NUL-terminated string, `rho`
/// writable and `counts` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn ns_sensitivity(
    a: *const NsGraph,
    b: *const NsGraph,
    measure_token: *const c_char,
    rho: *mut f64,
    counts: *mut NsPairCounts,
) -> NsStatus {
    guard(|| {
        let (a, b) = (graph_ref(a)?, graph_ref(b)?);
        let m = measure(string_arg(measure_token, "measure")?)?;
        let rho = out_ptr(rho, "rho")?;
        let ca = m.compute(a).or_else(|e| fail(NsStatus::Undefined, e.to_string()))?;
        let cb = m.compute(b).or_else(|e| fail(NsStatus::Undefined, e.to_string()))?;
        let pc = classify_pairs(&ca, &cb)?;
        if let Some(c) = counts.as_mut() {
            *c = NsPairCounts {
                concordant: pc.concordant,
                discordant: pc.discordant,
                ties: pc.ties,
                compared_nodes: pc.compared_nodes as u64,
            };
        }
        *rho = pc.rho()?;
        Ok(())
    })
}

/// Estimates the sensitivity of `observed` under `mechanism` with
/// `inner_samples` Monte-Carlo draws.
///
/// # Safety
/// `observed` must be a live handle, the strings NUL-terminated and `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn ns_estimate(
    observed: *const NsGraph,
    mechanism: *const c_char,
    measure_token: *const c_char,
    estimator: NsEstimator,
    inner_samples: usize,
    seed: u64,
    out: *mut NsEstimate,
) -> NsStatus {
    guard(|| {
        let g = graph_ref(observed)?;
        let phi = string_arg(mechanism, "mechanism")?.parse()?;
        let cfg = EstimatorConfig {
            inner_samples,
            seed: RngSeed::from_master(seed),
            measure: measure(string_arg(measure_token, "measure")?)?,
        };
        let out = out_ptr(out, "out")?;
        let e: Estimate = match estimator {
            NsEstimator::Iterative => iterative_estimate(g, &phi, &cfg)?,
            NsEstimator::Imputation => imputation_estimate(g, &phi, &cfg)?,
        };
        *out = NsEstimate {
            value: e.value,
            std_error: e.std_error,
            defined_draws: e.defined_draws as u64,
            undefined_draws: e.undefined_draws as u64,
        };
        Ok(())
    })
}
