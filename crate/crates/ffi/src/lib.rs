//! C ABI over `modbc`.
//!
//! Graphs live behind an opaque `ModbcGraph` handle created by one of the
//! `modbc_graph_*` constructors and released with `modbc_graph_free`. Every call
//! returns a `ModbcStatus`; on failure the message is available from
//! `modbc_last_error` on the same thread. Score vectors are written into
//! caller-owned buffers of `len` doubles, where `len` must be at least the node count.

use std::cell::RefCell;
use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use modbc::coarse::coarse_global;
use modbc::exact::{betweenness, brute_force_bc};
use modbc::io::parse_graph_file;
use modbc::modular::{global_centrality, local_centrality, validate_precondition};
use modbc::synth::{generate, GenConfig, ModuleRule};
use modbc::{classify_edges, Edge, Graph};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModbcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidGraph = 2,
    InvalidArgument = 3,
    BufferTooSmall = 4,
    PreconditionViolated = 5,
    GraphTooLarge = 6,
    Panic = 7,
}

/// Opaque graph handle.
pub struct ModbcGraph {
    inner: Graph,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn fail(status: ModbcStatus, message: impl Into<String>) -> ModbcStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = message.into());
    status
}

fn guarded(f: impl FnOnce() -> ModbcStatus) -> ModbcStatus {
    LAST_ERROR.with(|e| e.borrow_mut().clear());
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(ModbcStatus::Panic, "internal panic"))
}

unsafe fn graph_ref<'a>(g: *const ModbcGraph) -> Result<&'a Graph, ModbcStatus> {
    match g.as_ref() {
        Some(h) => Ok(&h.inner),
        None => Err(fail(ModbcStatus::NullPointer, "graph handle is null")),
    }
}

/// Optional output buffer: null is allowed and skipped.
unsafe fn out_buf<'a>(
    p: *mut f64,
    len: usize,
    need: usize,
) -> Result<Option<&'a mut [f64]>, ModbcStatus> {
    if p.is_null() {
        return Ok(None);
    }
    if len < need {
        return Err(fail(
            ModbcStatus::BufferTooSmall,
            format!("buffer holds {len} values, need {need}"),
        ));
    }
    Ok(Some(slice::from_raw_parts_mut(p, need)))
}

fn copy_into(dst: Option<&mut [f64]>, src: &[f64]) {
    if let Some(d) = dst {
        d.copy_from_slice(src);
    }
}

unsafe fn publish(out: *mut *mut ModbcGraph, g: Graph) -> ModbcStatus {
    *out = Box::into_raw(Box::new(ModbcGraph { inner: g }));
    ModbcStatus::Ok
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len - 1` bytes). Returns the full message length in bytes.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn modbc_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Parses the line-oriented graph format from `len` bytes at `text`.
///
/// # Safety
/// `text` must be valid for `len` bytes and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn modbc_graph_parse(
    text: *const u8,
    len: usize,
    out: *mut *mut ModbcGraph,
) -> ModbcStatus {
    guarded(|| {
        if text.is_null() || out.is_null() {
            return fail(ModbcStatus::NullPointer, "null argument");
        }
        match parse_graph_file(slice::from_raw_parts(text, len)) {
            Ok(g) => publish(out, g),
            Err(e) => fail(ModbcStatus::InvalidGraph, e.to_string()),
        }
    })
}

/// Builds a graph from `edge_count` edges given as parallel arrays, with
/// `modules[i]` the module of node `i`.
///
/// # Safety
/// `us`, `vs` and `weights` must hold `edge_count` values; `modules` must hold
/// `node_count` values; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn modbc_graph_from_edges(
    node_count: usize,
    modules: *const usize,
    edge_count: usize,
    us: *const usize,
    vs: *const usize,
    weights: *const f64,
    out: *mut *mut ModbcGraph,
) -> ModbcStatus {
    guarded(|| {
        if out.is_null() || (node_count > 0 && modules.is_null()) {
            return fail(ModbcStatus::NullPointer, "null argument");
        }
        if edge_count > 0 && (us.is_null() || vs.is_null() || weights.is_null()) {
            return fail(ModbcStatus::NullPointer, "null edge array");
        }
        let module_of = if node_count == 0 {
            Vec::new()
        } else {
            slice::from_raw_parts(modules, node_count).to_vec()
        };
        let edges: Vec<Edge> = (0..edge_count)
            .map(|i| Edge::new(*us.add(i), *vs.add(i), *weights.add(i)))
            .collect();
        match Graph::build(node_count, &edges, module_of) {
            Ok(g) => publish(out, g),
            Err(e) => fail(ModbcStatus::InvalidGraph, e.to_string()),
        }
    })
}

/// Seeded synthetic modular graph. `module_count == 0` selects `floor(sqrt(n))` modules.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn modbc_graph_generate(
    node_count: usize,
    module_count: usize,
    seed: u64,
    enforce_p: bool,
    out: *mut *mut ModbcGraph,
) -> ModbcStatus {
    guarded(|| {
        if out.is_null() {
            return fail(ModbcStatus::NullPointer, "null argument");
        }
        let rule = if module_count == 0 {
            ModuleRule::Sqrt
        } else {
            ModuleRule::Explicit(module_count)
        };
        match generate(&GenConfig::new(node_count, rule, seed).enforce_p(enforce_p)) {
            Ok(g) => publish(out, g),
            Err(e) => fail(ModbcStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `g` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn modbc_graph_free(g: *mut ModbcGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Node count, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn modbc_graph_node_count(g: *const ModbcGraph) -> usize {
    g.as_ref().map_or(0, |h| h.inner.node_count())
}

/// Module count, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn modbc_graph_module_count(g: *const ModbcGraph) -> usize {
    g.as_ref().map_or(0, |h| h.inner.module_count())
}

/// Exact betweenness over ordered pairs.
///
/// # Safety
/// `g` must be a live handle; `scores` must be valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn modbc_exact_bc(
    g: *const ModbcGraph,
    scores: *mut f64,
    len: usize,
) -> ModbcStatus {
    guarded(|| {
        let g = match graph_ref(g) {
            Ok(g) => g,
            Err(s) => return s,
        };
        if scores.is_null() {
            return fail(ModbcStatus::NullPointer, "null score buffer");
        }
        match out_buf(scores, len, g.node_count()) {
            Ok(dst) => {
                copy_into(dst, &betweenness(g).scores);
                ModbcStatus::Ok
            }
            Err(s) => s,
        }
    })
}

/// Betweenness by explicit path enumeration. Small graphs only.
///
/// # Safety
/// `g` must be a live handle; `scores` must be valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn modbc_oracle_bc(
    g: *const ModbcGraph,
    scores: *mut f64,
    len: usize,
) -> ModbcStatus {
    guarded(|| {
        let g = match graph_ref(g) {
            Ok(g) => g,
            Err(s) => return s,
        };
        if scores.is_null() {
            return fail(ModbcStatus::NullPointer, "null score buffer");
        }
        let dst = match out_buf(scores, len, g.node_count()) {
            Ok(d) => d,
            Err(s) => return s,
        };
        match brute_force_bc(g) {
            Ok(bc) => {
                copy_into(dst, &bc.scores);
                ModbcStatus::Ok
            }
            Err(e) => fail(ModbcStatus::GraphTooLarge, e.to_string()),
        }
    })
}

/// Checks that no intra-module shortest path leaves its module, using every node
/// as a source.
///
/// # Safety
/// `g` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn modbc_validate(g: *const ModbcGraph) -> ModbcStatus {
    guarded(|| {
        let g = match graph_ref(g) {
            Ok(g) => g,
            Err(s) => return s,
        };
        match validate_precondition(g, &classify_edges(g), None) {
            Ok(()) => ModbcStatus::Ok,
            Err(e) => fail(ModbcStatus::PreconditionViolated, e.to_string()),
        }
    })
}

/// Local, external and global centrality. Any of `lc`, `ec`, `gc` and
/// `central_node` may be null.
///
/// # Safety
/// `g` must be a live handle; non-null buffers must be valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn modbc_modular(
    g: *const ModbcGraph,
    lc: *mut f64,
    ec: *mut f64,
    gc: *mut f64,
    len: usize,
    central_node: *mut usize,
) -> ModbcStatus {
    guarded(|| {
        let g = match graph_ref(g) {
            Ok(g) => g,
            Err(s) => return s,
        };
        let n = g.node_count();
        let bufs = (
            out_buf(lc, len, n),
            out_buf(ec, len, n),
            out_buf(gc, len, n),
        );
        let (lc, ec, gc) = match bufs {
            (Ok(a), Ok(b), Ok(c)) => (a, b, c),
            (Err(s), _, _) | (_, Err(s), _) | (_, _, Err(s)) => return s,
        };
        let r = global_centrality(g, &classify_edges(g));
        copy_into(lc, &r.lc.scores);
        copy_into(ec, &r.ec.scores);
        copy_into(gc, &r.gc.scores);
        if let Some(c) = central_node.as_mut() {
            *c = r.global_central_node;
        }
        ModbcStatus::Ok
    })
}

/// Coarse module-graph centrality. Any of `ic`, `ec`, `gc` and `central_node`
/// may be null.
///
/// # Safety
/// `g` must be a live handle; non-null buffers must be valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn modbc_coarse(
    g: *const ModbcGraph,
    weighted: bool,
    ic: *mut f64,
    ec: *mut f64,
    gc: *mut f64,
    len: usize,
    central_node: *mut usize,
) -> ModbcStatus {
    guarded(|| {
        let g = match graph_ref(g) {
            Ok(g) => g,
            Err(s) => return s,
        };
        let n = g.node_count();
        let bufs = (
            out_buf(ic, len, n),
            out_buf(ec, len, n),
            out_buf(gc, len, n),
        );
        let (ic, ec, gc) = match bufs {
            (Ok(a), Ok(b), Ok(c)) => (a, b, c),
            (Err(s), _, _) | (_, Err(s), _) | (_, _, Err(s)) => return s,
        };
        let p = classify_edges(g);
        let (lc, _) = local_centrality(g, &p);
        let r = coarse_global(g, &p, &lc, weighted);
        copy_into(ic, &r.ic.scores);
        copy_into(ec, &r.node_ec);
        copy_into(gc, &r.coarse_gc.scores);
        if let Some(c) = central_node.as_mut() {
            *c = r.coarse_central_node;
        }
        ModbcStatus::Ok
    })
}
