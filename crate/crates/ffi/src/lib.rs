//! C ABI over `ceralign`.
//!
//! Graphs and sampled pairs are opaque handles owned by the caller and
//! released with the matching `_free` function. Every fallible call returns a
//! [`CeralignStatus`]; on failure `ceralign_last_error` gives a message for the
//! calling thread. Strings returned by the library are released with
//! `ceralign_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ceralign::bounds::dense_z2;
use ceralign::estimator::{automorphism_count, map_estimate, q_set_size};
use ceralign::experiment::verify_gf;
use ceralign::model::{anonymize, sample_pair};
use ceralign::perm::Permutation;
use ceralign::{CorrelatedPair, Error, Graph, PVec};
use num_traits::ToPrimitive;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CeralignStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    CapExceeded = 4,
    Parse = 5,
    Io = 6,
    Config = 7,
    Panic = 8,
}

/// Opaque graph handle.
pub struct CeralignGraph(Graph);

/// Opaque handle to a sampled `(Ga, Gb)` pair.
pub struct CeralignPair(CorrelatedPair);

/// Plain-data result of `ceralign_map_estimate`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CeralignAlignment {
    pub min_delta_hamming: u64,
    pub ties: u64,
    /// The remaining fields are meaningful only when this is true.
    pub has_planted: bool,
    pub q_size: u64,
    pub strict_success: bool,
    pub eta_numerator: u64,
    pub eta_denominator: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> CeralignStatus {
    match e {
        Error::Parameter(_) => CeralignStatus::InvalidArgument,
        Error::Domain(_) => CeralignStatus::Domain,
        Error::CapExceeded { .. } => CeralignStatus::CapExceeded,
        Error::Parse { .. } => CeralignStatus::Parse,
        Error::Config(_) => CeralignStatus::Config,
        Error::Io { .. } => CeralignStatus::Io,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (CeralignStatus, String)>) -> CeralignStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CeralignStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            CeralignStatus::Panic
        }
    }
}

fn lib(e: Error) -> (CeralignStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (CeralignStatus, String) {
    (CeralignStatus::NullPointer, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (CeralignStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), (CeralignStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

/// Message for the last failed call on this thread, or NULL. The pointer is
/// valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn ceralign_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ceralign_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ceralign_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses the text form `n=<n>;edges=<hex>`.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ceralign_graph_parse(text: *const c_char, out: *mut *mut CeralignGraph) -> CeralignStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| (CeralignStatus::InvalidArgument, "text is not UTF-8".to_string()))?;
        let g: Graph = s.parse().map_err(lib)?;
        write_out(out, Box::into_raw(Box::new(CeralignGraph(g))), "out")
    })
}

/// Graph from an edge list given as `2·edge_count` vertex indices.
///
/// # Safety
/// `edges` must point to `2·edge_count` values (or be NULL when `edge_count` is 0).
#[no_mangle]
pub unsafe extern "C" fn ceralign_graph_from_edges(
    n: usize,
    edges: *const usize,
    edge_count: usize,
    out: *mut *mut CeralignGraph,
) -> CeralignStatus {
    guard(|| {
        let flat: &[usize] = if edge_count == 0 {
            &[]
        } else if edges.is_null() {
            return Err(null("edges"));
        } else {
            std::slice::from_raw_parts(edges, 2 * edge_count)
        };
        let list: Vec<(usize, usize)> = flat.chunks(2).map(|c| (c[0], c[1])).collect();
        let g = Graph::from_edges(n, &list).map_err(lib)?;
        write_out(out, Box::into_raw(Box::new(CeralignGraph(g))), "out")
    })
}

/// # Safety
/// `g` must be NULL or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn ceralign_graph_free(g: *mut CeralignGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Number of vertices, or 0 for NULL.
///
/// # Safety
/// `g` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ceralign_graph_vertex_count(g: *const CeralignGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.vertex_count())
}

/// Number of edges, or 0 for NULL.
///
/// # Safety
/// `g` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ceralign_graph_edge_count(g: *const CeralignGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.edge_count())
}

/// Text form of a graph; release with `ceralign_string_free`.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ceralign_graph_to_string(g: *const CeralignGraph, out: *mut *mut c_char) -> CeralignStatus {
    guard(|| {
        let g = deref(g, "graph")?;
        let s = CString::new(g.0.to_string()).expect("graph text has no NUL");
        write_out(out, s.into_raw(), "out")
    })
}

/// Samples `(Ga, Gb) ~ ER(n, p)` from `seed`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ceralign_sample_pair(
    n: usize,
    p11: f64,
    p10: f64,
    p01: f64,
    p00: f64,
    seed: u64,
    out: *mut *mut CeralignPair,
) -> CeralignStatus {
    guard(|| {
        let p = PVec::float(p11, p10, p01, p00).map_err(lib)?;
        let pair = sample_pair(n, &p, seed).map_err(lib)?;
        write_out(out, Box::into_raw(Box::new(CeralignPair(pair))), "out")
    })
}

/// # Safety
/// `p` must be NULL or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn ceralign_pair_free(p: *mut CeralignPair) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// New handle holding a copy of `Ga` (`which = 0`) or `Gb` (`which = 1`).
///
/// # Safety
/// `pair` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ceralign_pair_graph(
    pair: *const CeralignPair,
    which: u32,
    out: *mut *mut CeralignGraph,
) -> CeralignStatus {
    guard(|| {
        let pair = deref(pair, "pair")?;
        let g = match which {
            0 => pair.0.ga.clone(),
            1 => pair.0.gb.clone(),
            _ => return Err((CeralignStatus::InvalidArgument, format!("which must be 0 or 1, got {which}"))),
        };
        write_out(out, Box::into_raw(Box::new(CeralignGraph(g))), "out")
    })
}

unsafe fn read_perm(images: *const usize, n: usize) -> Result<Permutation, (CeralignStatus, String)> {
    if images.is_null() {
        return Err(null("images"));
    }
    Permutation::from_images(std::slice::from_raw_parts(images, n).to_vec()).map_err(lib)
}

/// Relabels `g` by the permutation `images[0..n]`.
///
/// # Safety
/// `g` must be a live handle, `images` must hold as many entries as `g` has
/// vertices, and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ceralign_anonymize(
    g: *const CeralignGraph,
    images: *const usize,
    out: *mut *mut CeralignGraph,
) -> CeralignStatus {
    guard(|| {
        let g = deref(g, "graph")?;
        let pi = read_perm(images, g.0.vertex_count())?;
        let c = anonymize(&g.0, &pi).map_err(lib)?;
        write_out(out, Box::into_raw(Box::new(CeralignGraph(c))), "out")
    })
}

/// Exhaustive MAP alignment of `gc` against `gb`.
///
/// `planted` may be NULL; otherwise it holds `n` images used for scoring.
/// `best_perm` may be NULL; otherwise it receives the `n` images of the estimate.
///
/// # Safety
/// Handles must be live; non-NULL buffers must hold `n` entries; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ceralign_map_estimate(
    gc: *const CeralignGraph,
    gb: *const CeralignGraph,
    planted: *const usize,
    best_perm: *mut usize,
    out: *mut CeralignAlignment,
) -> CeralignStatus {
    guard(|| {
        let gc = deref(gc, "gc")?;
        let gb = deref(gb, "gb")?;
        let n = gb.0.vertex_count();
        let planted = if planted.is_null() { None } else { Some(read_perm(planted, n)?) };
        let r = map_estimate(&gc.0, &gb.0, planted.as_ref()).map_err(lib)?;
        let mut res = CeralignAlignment {
            min_delta_hamming: r.min_delta_hamming as u64,
            ties: r.ties,
            ..Default::default()
        };
        if let Some(s) = &r.planted {
            res.has_planted = true;
            res.q_size = s.q_size;
            res.strict_success = s.strict_success;
            res.eta_numerator = s.eta.numer().to_u64().unwrap_or(0);
            res.eta_denominator = s.eta.denom().to_u64().unwrap_or(1);
        }
        if !best_perm.is_null() {
            std::slice::from_raw_parts_mut(best_perm, n).copy_from_slice(r.best_perm.images());
        }
        write_out(out, res, "out")
    })
}

/// `|Aut(g)|`.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ceralign_automorphism_count(g: *const CeralignGraph, out: *mut u64) -> CeralignStatus {
    guard(|| {
        let g = deref(g, "graph")?;
        write_out(out, automorphism_count(&g.0).map_err(lib)?, "out")
    })
}

/// `|{π : δ(l(π); ga, gb) ≤ 0}|`.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ceralign_q_set_size(
    ga: *const CeralignGraph,
    gb: *const CeralignGraph,
    out: *mut u64,
) -> CeralignStatus {
    guard(|| {
        let ga = deref(ga, "ga")?;
        let gb = deref(gb, "gb")?;
        write_out(out, q_set_size(&ga.0, &gb.0).map_err(lib)?, "out")
    })
}

/// `z₂` of the dense bound `P[δ ≤ 0] ≤ z₂^ñ`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ceralign_dense_z2(
    n: usize,
    p11: f64,
    p10: f64,
    p01: f64,
    p00: f64,
    out: *mut f64,
) -> CeralignStatus {
    guard(|| {
        let p = PVec::float(p11, p10, p01, p00).map_err(lib)?;
        write_out(out, dense_z2(n, &p).map_err(lib)?, "out")
    })
}

/// Runs the generating-function suite to cycle length `depth` (1..=8).
///
/// # Safety
/// `passed` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ceralign_verify_gf(depth: usize, passed: *mut bool) -> CeralignStatus {
    guard(|| {
        let r = verify_gf(depth).map_err(lib)?;
        write_out(passed, r.passed(), "passed")
    })
}
