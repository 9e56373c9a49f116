//! C ABI over the negsphere library.
//!
//! Every fallible function returns an [`NsStatus`] and writes results
//! through out-pointers. On failure a message is kept per thread and can
//! be read with [`ns_last_error_message`]. Graphs and search results are
//! opaque handles owned by the caller and released with their `_free`
//! function; strings returned through `char **` are released with
//! [`ns_string_free`]. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use negsphere::fibration::build_full_tree;
use negsphere::{
    best_sphere, canonical_decomposition, guaranteed_square, s_closed_form, s_construction, Error, PlumbingGraph,
    SearchOptions, SearchResult,
};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NsStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Arguments rejected by validation (degree, limits, JSON, UTF-8...).
    InvalidInput = 2,
    /// Integer overflow in exact arithmetic.
    Overflow = 3,
    /// Vertex or edge index does not exist.
    NotFound = 4,
    /// The graph is empty, disconnected, cyclic or has positive genus.
    NotATree = 5,
    /// No fibration fits the requested budget.
    NoSolution = 6,
    /// Internal consistency check failed.
    Internal = 7,
    /// A panic was caught at the boundary.
    Panic = 8,
}

/// Opaque plumbing graph.
pub struct NsGraph(PlumbingGraph);

/// Opaque search result.
pub struct NsSearchResult(SearchResult);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(NsStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Overflow(_) => NsStatus::Overflow,
            Error::MissingVertex(_) | Error::MissingEdge(..) => NsStatus::NotFound,
            Error::EmptyGraph
            | Error::Disconnected
            | Error::NotBipartite(_)
            | Error::NotATree { .. }
            | Error::PositiveGenus { .. } => NsStatus::NotATree,
            Error::NoSolution { .. } => NsStatus::NoSolution,
            Error::ReplayMismatch { .. } => NsStatus::Internal,
            _ => NsStatus::InvalidInput,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(NsStatus::NullPointer, format!("{what} is null"))
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> NsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            NsStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("panic inside negsphere".into());
            NsStatus::Panic
        }
    }
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn graph_ref<'a>(g: *const NsGraph) -> Result<&'a PlumbingGraph, Failure> {
    g.as_ref().map(|g| &g.0).ok_or_else(|| null("graph"))
}

unsafe fn graph_mut<'a>(g: *mut NsGraph) -> Result<&'a mut PlumbingGraph, Failure> {
    g.as_mut().map(|g| &mut g.0).ok_or_else(|| null("graph"))
}

unsafe fn result_ref<'a>(r: *const NsSearchResult) -> Result<&'a SearchResult, Failure> {
    r.as_ref().map(|r| &r.0).ok_or_else(|| null("search result"))
}

unsafe fn str_arg<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure(NsStatus::InvalidInput, format!("{what} is not UTF-8")))
}

fn owned_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Failure(NsStatus::Internal, "string contains NUL".into()))
}

/// Message for the last failed call on this thread, or null after a
/// successful call. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ns_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn ns_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ns_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Square of the canonical sphere in E(n).
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ns_s_construction(n: u32, out: *mut i64) -> NsStatus {
    guard(|| write(out, s_construction(n)?, "out"))
}

/// The published closed form as an exact fraction `num / den`.
///
/// # Safety
/// `out_num` and `out_den` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ns_s_closed_form(n: u32, out_num: *mut i64, out_den: *mut i64) -> NsStatus {
    guard(|| {
        if n < 2 {
            return Err(Error::DegreeTooSmall(n).into());
        }
        let r = s_closed_form(n);
        write(out_num, *r.numer(), "out_num")?;
        write(out_den, *r.denom(), "out_den")
    })
}

/// `s(n) − 5k`, the square reachable in E(n)#k by edge blow-ups alone.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ns_guaranteed_square(n: u32, k: u32, out: *mut i64) -> NsStatus {
    guard(|| write(out, guaranteed_square(n, k)?, "out"))
}

/// Empty graph. Never null.
#[no_mangle]
pub extern "C" fn ns_graph_new() -> *mut NsGraph {
    Box::into_raw(Box::new(NsGraph(PlumbingGraph::new())))
}

/// Releases a graph. Null is ignored.
///
/// # Safety
/// `g` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ns_graph_free(g: *mut NsGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Parses a graph from its JSON form.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ns_graph_from_json(json: *const c_char, out: *mut *mut NsGraph) -> NsStatus {
    guard(|| {
        let text = str_arg(json, "json")?;
        let g: PlumbingGraph =
            serde_json::from_str(text).map_err(|e| Failure(NsStatus::InvalidInput, e.to_string()))?;
        write(out, Box::into_raw(Box::new(NsGraph(g))), "out")
    })
}

/// Tree of the canonical sphere in E(n).
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ns_build_canonical_tree(n: u32, out: *mut *mut NsGraph) -> NsStatus {
    guard(|| {
        let g = build_full_tree(&canonical_decomposition(n)?)?.graph;
        write(out, Box::into_raw(Box::new(NsGraph(g))), "out")
    })
}

/// Adds a genus-0 vertex. `label` may be null.
///
/// # Safety
/// `g` must be a live graph, `label` null or NUL-terminated, `out_index`
/// null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ns_graph_add_vertex(
    g: *mut NsGraph,
    label: *const c_char,
    weight: i64,
    out_index: *mut usize,
) -> NsStatus {
    guard(|| {
        let g = graph_mut(g)?;
        let label = if label.is_null() { "" } else { str_arg(label, "label")? };
        let v = g.add_vertex(label, weight);
        if !out_index.is_null() {
            out_index.write(v);
        }
        Ok(())
    })
}

/// # Safety
/// `g` must be a live graph.
#[no_mangle]
pub unsafe extern "C" fn ns_graph_add_edge(g: *mut NsGraph, u: usize, v: usize) -> NsStatus {
    guard(|| Ok(graph_mut(g)?.add_edge(u, v)?))
}

/// Blows up the intersection point of `u` and `v`. The new exceptional
/// vertex index goes to `out_vertex` if it is not null.
///
/// # Safety
/// `g` must be a live graph; `out_vertex` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ns_graph_blow_up_edge(
    g: *mut NsGraph,
    u: usize,
    v: usize,
    out_vertex: *mut usize,
) -> NsStatus {
    guard(|| {
        let x = graph_mut(g)?.blow_up_edge_mut(u, v)?;
        if !out_vertex.is_null() {
            out_vertex.write(x);
        }
        Ok(())
    })
}

/// Blows up a generic point of vertex `v`.
///
/// # Safety
/// `g` must be a live graph; `out_vertex` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ns_graph_blow_up_point(g: *mut NsGraph, v: usize, out_vertex: *mut usize) -> NsStatus {
    guard(|| {
        let x = graph_mut(g)?.blow_up_point_mut(v)?;
        if !out_vertex.is_null() {
            out_vertex.write(x);
        }
        Ok(())
    })
}

/// Square of the sphere obtained by smoothing the tree.
///
/// # Safety
/// `g` must be a live graph; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ns_graph_smooth(g: *const NsGraph, out: *mut i64) -> NsStatus {
    guard(|| write(out, graph_ref(g)?.smooth()?, "out"))
}

/// Same square computed as `vᵀQv` from the intersection matrix.
///
/// # Safety
/// `g` must be a live graph; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ns_graph_oracle_square(g: *const NsGraph, out: *mut i64) -> NsStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let c = g.two_coloring()?;
        write(out, g.oracle_square(&c)?, "out")
    })
}

/// Vertex count, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live graph.
#[no_mangle]
pub unsafe extern "C" fn ns_graph_vertex_count(g: *const NsGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.vertex_count())
}

/// Edge count, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live graph.
#[no_mangle]
pub unsafe extern "C" fn ns_graph_edge_count(g: *const NsGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.edge_count())
}

/// JSON form of the graph. Free with [`ns_string_free`].
///
/// # Safety
/// `g` must be a live graph; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ns_graph_to_json(g: *const NsGraph, out: *mut *mut c_char) -> NsStatus {
    guard(|| {
        let text = serde_json::to_string(graph_ref(g)?).map_err(|e| Failure(NsStatus::Internal, e.to_string()))?;
        write(out, owned_string(text)?, "out")
    })
}

/// Graphviz DOT text. `name` may be null. Free with [`ns_string_free`].
///
/// # Safety
/// `g` must be a live graph; `name` null or NUL-terminated; `out` valid
/// for writes.
#[no_mangle]
pub unsafe extern "C" fn ns_graph_to_dot(g: *const NsGraph, name: *const c_char, out: *mut *mut c_char) -> NsStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let name = if name.is_null() { "G" } else { str_arg(name, "name")? };
        write(out, owned_string(g.to_dot(name))?, "out")
    })
}

/// Most negative sphere in E(n)#k over the default fiber set.
/// `threads == 0` uses the shared pool.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ns_search(n: u32, k: u32, threads: u32, out: *mut *mut NsSearchResult) -> NsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let opts = SearchOptions {
            threads: (threads > 0).then_some(threads as usize),
            ..SearchOptions::default()
        };
        let r = best_sphere(n, k, &opts)?;
        write(out, Box::into_raw(Box::new(NsSearchResult(r))), "out")
    })
}

/// # Safety
/// `r` must come from [`ns_search`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ns_search_result_free(r: *mut NsSearchResult) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// # Safety
/// `r` must be a live result; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ns_search_result_best_square(r: *const NsSearchResult, out: *mut i64) -> NsStatus {
    guard(|| write(out, result_ref(r)?.best_square, "out"))
}

/// `best_square / b2` in lowest terms.
///
/// # Safety
/// `r` must be a live result; both out-pointers valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ns_search_result_ratio(
    r: *const NsSearchResult,
    out_num: *mut i64,
    out_den: *mut i64,
) -> NsStatus {
    guard(|| {
        let ratio = result_ref(r)?.ratio;
        write(out_num, ratio.num, "out_num")?;
        write(out_den, ratio.den, "out_den")
    })
}

/// Rebuilds the winning tree as a new graph handle.
///
/// # Safety
/// `r` must be a live result; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ns_search_result_graph(r: *const NsSearchResult, out: *mut *mut NsGraph) -> NsStatus {
    guard(|| {
        let g = result_ref(r)?.replay()?;
        write(out, Box::into_raw(Box::new(NsGraph(g))), "out")
    })
}

/// JSON form of the result. Free with [`ns_string_free`].
///
/// # Safety
/// `r` must be a live result; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ns_search_result_to_json(r: *const NsSearchResult, out: *mut *mut c_char) -> NsStatus {
    guard(|| {
        let text = serde_json::to_string(result_ref(r)?).map_err(|e| Failure(NsStatus::Internal, e.to_string()))?;
        write(out, owned_string(text)?, "out")
    })
}
