//! C ABI surface: opaque graph handles, integer error codes, and a
//! thread-local last-error message. The matching declarations live in
//! include/partix.h.

use partix::bagen::{ba_generate, BaParams};
use partix::error::Error;
use partix::graph::{cut_value, Graph};
use partix::mapping::{top_down_map, HierarchySpec};
use partix::multilevel::{self, PartitionConfig};
use partix::separator::multilevel_separator;
use partix::spac::{edge_partition, eval_edge_partition};
use std::cell::RefCell;
use std::ffi::{c_char, c_double, c_int, CStr, CString};
use std::path::Path;

pub const PX_OK: c_int = 0;
pub const PX_ERR_INVALID: c_int = 1;
pub const PX_ERR_INFEASIBLE: c_int = 2;
pub const PX_ERR_IO: c_int = 3;
pub const PX_ERR_PARSE: c_int = 4;

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn code_of(err: &Error) -> c_int {
    match err {
        Error::Parse { .. } => PX_ERR_PARSE,
        Error::InvalidInput(_) => PX_ERR_INVALID,
        Error::Infeasible(_) => PX_ERR_INFEASIBLE,
        Error::Io(_) => PX_ERR_IO,
    }
}

fn fail(err: &Error) -> c_int {
    set_error(&err.to_string());
    code_of(err)
}

fn invalid(msg: &str) -> c_int {
    set_error(msg);
    PX_ERR_INVALID
}

/// Opaque graph handle.
pub struct PxGraph(Graph);

/// Message of the last failed call on this thread; valid until the next
/// failing call.
#[no_mangle]
pub extern "C" fn px_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Load a METIS graph file. Returns null on failure (see
/// px_last_error_message).
///
/// # Safety
/// `path` must be a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn px_graph_load(path: *const c_char) -> *mut PxGraph {
    if path.is_null() {
        invalid("path is null");
        return std::ptr::null_mut();
    }
    let Ok(path) = CStr::from_ptr(path).to_str() else {
        invalid("path is not valid UTF-8");
        return std::ptr::null_mut();
    };
    match partix::io::load_metis(Path::new(path)) {
        Ok(g) => Box::into_raw(Box::new(PxGraph(g))),
        Err(e) => {
            fail(&e);
            std::ptr::null_mut()
        }
    }
}

/// Build a graph from an edge list (`edges` holds 2*num_edges node ids).
/// `node_weights` may be null for unit weights.
///
/// # Safety
/// `edges` must point to 2*num_edges readable u64 values and
/// `node_weights`, when non-null, to num_nodes readable i64 values.
#[no_mangle]
pub unsafe extern "C" fn px_graph_from_edges(
    num_nodes: u64,
    edges: *const u64,
    num_edges: u64,
    node_weights: *const i64,
) -> *mut PxGraph {
    if edges.is_null() && num_edges > 0 {
        invalid("edges is null");
        return std::ptr::null_mut();
    }
    let raw = std::slice::from_raw_parts(edges, 2 * num_edges as usize);
    let n = num_nodes as usize;
    let mut list = Vec::with_capacity(num_edges as usize);
    for pair in raw.chunks_exact(2) {
        let (u, v) = (pair[0] as usize, pair[1] as usize);
        if u >= n || v >= n {
            invalid("edge endpoint out of range");
            return std::ptr::null_mut();
        }
        if u != v {
            list.push((u.min(v), u.max(v), 1));
        }
    }
    let weights = if node_weights.is_null() {
        None
    } else {
        Some(std::slice::from_raw_parts(node_weights, n).to_vec())
    };
    match Graph::from_edges(n, &list, weights) {
        Ok(g) => Box::into_raw(Box::new(PxGraph(g))),
        Err(e) => {
            fail(&e);
            std::ptr::null_mut()
        }
    }
}

/// # Safety
/// `graph` must come from a px_graph_* constructor and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn px_graph_free(graph: *mut PxGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// # Safety
/// `graph` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn px_graph_num_nodes(graph: *const PxGraph) -> u64 {
    (*graph).0.n() as u64
}

/// # Safety
/// `graph` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn px_graph_num_edges(graph: *const PxGraph) -> u64 {
    (*graph).0.m() as u64
}

/// k-way partition. `out_blocks` receives one block id per node;
/// `out_cut`, when non-null, the edge cut.
///
/// # Safety
/// `graph` must be live; `out_blocks` must hold num_nodes u32 values.
#[no_mangle]
pub unsafe extern "C" fn px_partition(
    graph: *const PxGraph,
    k: u64,
    eps: c_double,
    seed: u64,
    out_blocks: *mut u32,
    out_cut: *mut i64,
) -> c_int {
    if graph.is_null() || out_blocks.is_null() {
        return invalid("null argument");
    }
    let g = &(*graph).0;
    let cfg = PartitionConfig::new(k as usize, eps).with_seed(seed);
    match multilevel::partition(g, &cfg) {
        Ok(p) => {
            std::slice::from_raw_parts_mut(out_blocks, g.n()).copy_from_slice(&p.assignment);
            if !out_cut.is_null() {
                *out_cut = cut_value(g, &p);
            }
            PX_OK
        }
        Err(e) => fail(&e),
    }
}

/// Node separator. `out_labels` receives 0 (V1), 1 (V2) or 2 (separator)
/// per node; `out_weight`, when non-null, the separator weight.
///
/// # Safety
/// `graph` must be live; `out_labels` must hold num_nodes bytes.
#[no_mangle]
pub unsafe extern "C" fn px_separator(
    graph: *const PxGraph,
    eps: c_double,
    seed: u64,
    out_labels: *mut u8,
    out_weight: *mut i64,
) -> c_int {
    if graph.is_null() || out_labels.is_null() {
        return invalid("null argument");
    }
    let g = &(*graph).0;
    let cfg = PartitionConfig::new(2, eps).with_seed(seed);
    match multilevel_separator(g, eps, &cfg) {
        Ok(sep) => {
            std::slice::from_raw_parts_mut(out_labels, g.n()).copy_from_slice(&sep.assignment);
            if !out_weight.is_null() {
                *out_weight = sep.separator_weight();
            }
            PX_OK
        }
        Err(e) => fail(&e),
    }
}

/// Edge partition via the split-and-connect graph. `out_blocks` receives
/// one block id per edge in canonical (sorted, u<v) order;
/// `out_replication`, when non-null, the replication factor.
///
/// # Safety
/// `graph` must be live; `out_blocks` must hold num_edges u32 values.
#[no_mangle]
pub unsafe extern "C" fn px_edge_partition(
    graph: *const PxGraph,
    k: u64,
    eps: c_double,
    seed: u64,
    out_blocks: *mut u32,
    out_replication: *mut c_double,
) -> c_int {
    if graph.is_null() || out_blocks.is_null() {
        return invalid("null argument");
    }
    let g = &(*graph).0;
    let cfg = PartitionConfig::new(k as usize, eps).with_seed(seed);
    match edge_partition(g, &cfg) {
        Ok(ep) => {
            std::slice::from_raw_parts_mut(out_blocks, g.m())
                .copy_from_slice(&ep.edge_assignment);
            if !out_replication.is_null() {
                *out_replication = eval_edge_partition(g, &ep).0;
            }
            PX_OK
        }
        Err(e) => fail(&e),
    }
}

/// Map num_nodes tasks onto the hierarchy a1..ak (product must equal
/// num_nodes). `out_pes` receives one PE id per task.
///
/// # Safety
/// `graph` must be live; `factors` must hold num_factors u64 values;
/// `out_pes` must hold num_nodes u32 values.
#[no_mangle]
pub unsafe extern "C" fn px_map(
    graph: *const PxGraph,
    factors: *const u64,
    num_factors: u64,
    seed: u64,
    out_pes: *mut u32,
) -> c_int {
    if graph.is_null() || factors.is_null() || out_pes.is_null() {
        return invalid("null argument");
    }
    let g = &(*graph).0;
    let factors: Vec<usize> = std::slice::from_raw_parts(factors, num_factors as usize)
        .iter()
        .map(|&a| a as usize)
        .collect();
    let spec = match HierarchySpec::new(factors) {
        Ok(s) => s,
        Err(e) => return fail(&e),
    };
    let cfg = PartitionConfig::new(1, 0.0).with_seed(seed);
    match top_down_map(g, &spec, &cfg) {
        Ok(m) => {
            std::slice::from_raw_parts_mut(out_pes, g.n()).copy_from_slice(&m.sigma);
            PX_OK
        }
        Err(e) => fail(&e),
    }
}

/// Barabasi-Albert edges lo..hi for (n, d, n0, seed). `out_edges`
/// receives 2*(hi-lo) node ids; any chunking of the index range yields
/// identical edges.
///
/// # Safety
/// `out_edges` must hold 2*(hi-lo) u64 values.
#[no_mangle]
pub unsafe extern "C" fn px_ba_generate(
    n: u64,
    d: u64,
    n0: u64,
    seed: u64,
    lo: u64,
    hi: u64,
    out_edges: *mut u64,
) -> c_int {
    if out_edges.is_null() && hi > lo {
        return invalid("out_edges is null");
    }
    let params = match BaParams::new(n, d, n0, seed) {
        Ok(p) => p,
        Err(e) => return fail(&e),
    };
    match ba_generate(&params, lo, hi) {
        Ok(edges) => {
            let out = std::slice::from_raw_parts_mut(out_edges, 2 * (hi - lo) as usize);
            for (i, (u, v)) in edges.into_iter().enumerate() {
                out[2 * i] = u;
                out[2 * i + 1] = v;
            }
            PX_OK
        }
        Err(e) => fail(&e),
    }
}
