//! C ABI over `symcone`.
//!
//! Every fallible function returns a [`SymconeStatus`] and writes results
//! through out-pointers. On failure the message is available from
//! [`symcone_last_error`] on the same thread. Handles are opaque and must be
//! released with the matching `*_free` function; passing NULL to a free
//! function is a no-op.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use symcone::solver::solve_bushell_with;
use symcone::transforms::{AutomorphismWord, Generator};
use symcone::{Algebra, AlgebraKind, Element, Error, SolveConfig, SolveReport};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymconeStatus {
    Ok = 0,
    NullPointer = 1,
    /// Malformed coordinates, generator, configuration or mismatched algebras.
    InvalidArgument = 2,
    NotInCone = 3,
    NonConvergence = 4,
    /// The solver needs `|p| > 1`.
    ExponentOutOfRange = 5,
    EigensolverFailure = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymconeAlgebraKind {
    Orthant = 0,
    SymMatrix = 1,
    SpinFactor = 2,
}

impl From<SymconeAlgebraKind> for AlgebraKind {
    fn from(k: SymconeAlgebraKind) -> Self {
        match k {
            SymconeAlgebraKind::Orthant => AlgebraKind::Orthant,
            SymconeAlgebraKind::SymMatrix => AlgebraKind::SymMatrix,
            SymconeAlgebraKind::SpinFactor => AlgebraKind::SpinFactor,
        }
    }
}

/// An element of one of the algebras.
pub struct SymconeElement(Element);

/// A product of cone automorphisms, applied in push order.
pub struct SymconeWord(AutomorphismWord);

pub struct SymconeSolveReport(SolveReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> SymconeStatus {
    match e {
        Error::NotInCone { .. } | Error::NotNormalized { .. } | Error::MapLeftCone { .. } => {
            SymconeStatus::NotInCone
        }
        Error::NonConvergence { .. } => SymconeStatus::NonConvergence,
        Error::EigensolverFailure { .. } => SymconeStatus::EigensolverFailure,
        _ => SymconeStatus::InvalidArgument,
    }
}

fn fail(e: Error) -> SymconeStatus {
    let s = status_of(&e);
    set_error(e.to_string());
    s
}

fn null(name: &str) -> SymconeStatus {
    set_error(format!("`{name}` is NULL"));
    SymconeStatus::NullPointer
}

/// Runs `f`, turning panics into [`SymconeStatus::Panic`].
fn guard(f: impl FnOnce() -> SymconeStatus) -> SymconeStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            SymconeStatus::Panic
        }
    }
}

macro_rules! non_null {
    ($p:ident) => {
        if $p.is_null() {
            return null(stringify!($p));
        }
    };
}

macro_rules! try_or_fail {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return fail(e),
        }
    };
}

unsafe fn slice<'a, T>(data: *const T, len: usize) -> &'a [T] {
    if len == 0 {
        &[]
    } else {
        std::slice::from_raw_parts(data, len)
    }
}

unsafe fn emit<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

fn algebra(kind: SymconeAlgebraKind, param: usize) -> Result<Algebra, Error> {
    Algebra::new(kind.into(), param)
}

/// Message of the last failure on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn symcone_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Number of coordinates of an element: `n`, `r*r` (row-major) or `n`.
#[no_mangle]
pub extern "C" fn symcone_coord_len(kind: SymconeAlgebraKind, param: usize) -> usize {
    algebra(kind, param).map_or(0, |a| a.coord_len())
}

/// # Safety
/// `coords` must point to `len` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn symcone_element_new(
    kind: SymconeAlgebraKind,
    param: usize,
    coords: *const f64,
    len: usize,
    out: *mut *mut SymconeElement,
) -> SymconeStatus {
    guard(|| {
        non_null!(out);
        if len > 0 {
            non_null!(coords);
        }
        let alg = try_or_fail!(algebra(kind, param));
        let x = try_or_fail!(Element::new(alg, slice(coords, len).to_vec()));
        emit(out, SymconeElement(x));
        SymconeStatus::Ok
    })
}

/// # Safety
/// `x` must be NULL or a handle from this library that was not yet freed.
#[no_mangle]
pub unsafe extern "C" fn symcone_element_free(x: *mut SymconeElement) {
    if !x.is_null() {
        drop(Box::from_raw(x));
    }
}

/// # Safety
/// `x` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn symcone_element_len(x: *const SymconeElement) -> usize {
    x.as_ref().map_or(0, |x| x.0.coords().len())
}

/// Copies the coordinates into `buf`, which must hold `symcone_element_len` doubles.
///
/// # Safety
/// `x` must be a live handle and `buf` must have room for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn symcone_element_coords(
    x: *const SymconeElement,
    buf: *mut f64,
    len: usize,
) -> SymconeStatus {
    guard(|| {
        non_null!(x);
        non_null!(buf);
        let c = (*x).0.coords();
        if len < c.len() {
            set_error(format!("buffer holds {len} values, need {}", c.len()));
            return SymconeStatus::InvalidArgument;
        }
        ptr::copy_nonoverlapping(c.as_ptr(), buf, c.len());
        SymconeStatus::Ok
    })
}

/// Hilbert distance `d(x, y)`.
///
/// # Safety
/// `x`, `y` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn symcone_distance(
    x: *const SymconeElement,
    y: *const SymconeElement,
    out: *mut f64,
) -> SymconeStatus {
    guard(|| {
        non_null!(x);
        non_null!(y);
        non_null!(out);
        *out = try_or_fail!(symcone::distance(&(*x).0, &(*y).0)).distance;
        SymconeStatus::Ok
    })
}

/// `lambda_max = inf{l : l y - x in the cone}` and `lambda_min = sup{l : x - l y in the cone}`.
///
/// # Safety
/// `x`, `y` must be live handles; the out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn symcone_lambda_extremes(
    x: *const SymconeElement,
    y: *const SymconeElement,
    lambda_max: *mut f64,
    lambda_min: *mut f64,
) -> SymconeStatus {
    guard(|| {
        non_null!(x);
        non_null!(y);
        non_null!(lambda_max);
        non_null!(lambda_min);
        let (hi, lo) = try_or_fail!(symcone::lambda_extremes(&(*x).0, &(*y).0));
        *lambda_max = hi;
        *lambda_min = lo;
        SymconeStatus::Ok
    })
}

/// Spectral power `x^p`.
///
/// # Safety
/// `x` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn symcone_power(
    x: *const SymconeElement,
    p: f64,
    out: *mut *mut SymconeElement,
) -> SymconeStatus {
    guard(|| {
        non_null!(x);
        non_null!(out);
        let y = try_or_fail!(symcone::power(&(*x).0, p));
        emit(out, SymconeElement(y));
        SymconeStatus::Ok
    })
}

/// An empty word (the identity map).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn symcone_word_new(
    kind: SymconeAlgebraKind,
    param: usize,
    out: *mut *mut SymconeWord,
) -> SymconeStatus {
    guard(|| {
        non_null!(out);
        let alg = try_or_fail!(algebra(kind, param));
        emit(out, SymconeWord(AutomorphismWord::identity(alg)));
        SymconeStatus::Ok
    })
}

/// # Safety
/// `w` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn symcone_word_free(w: *mut SymconeWord) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

unsafe fn push(w: *mut SymconeWord, g: Generator) -> SymconeStatus {
    non_null!(w);
    try_or_fail!((*w).0.push(g));
    SymconeStatus::Ok
}

/// Appends `x -> mu x`, `mu > 0`.
///
/// # Safety
/// `w` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn symcone_word_push_scalar(w: *mut SymconeWord, mu: f64) -> SymconeStatus {
    guard(|| push(w, Generator::Scalar(mu)))
}

/// Appends the quadratic representation `x -> P(a) x`, `a` in the cone.
///
/// # Safety
/// `w` and `a` must be live handles.
#[no_mangle]
pub unsafe extern "C" fn symcone_word_push_quad(
    w: *mut SymconeWord,
    a: *const SymconeElement,
) -> SymconeStatus {
    guard(|| {
        non_null!(a);
        push(w, Generator::Quad((*a).0.clone()))
    })
}

/// Appends `X -> T^T X T` for an invertible row-major `side x side` matrix.
///
/// # Safety
/// `w` must be a live handle; `t` must point to `side * side` doubles.
#[no_mangle]
pub unsafe extern "C" fn symcone_word_push_congruence(
    w: *mut SymconeWord,
    t: *const f64,
    side: usize,
) -> SymconeStatus {
    guard(|| {
        non_null!(t);
        let t = slice(t, side * side).to_vec();
        push(w, Generator::Congruence { side, t })
    })
}

/// Appends the coordinate permutation `y_i = x_{sigma_i}` (orthant only).
///
/// # Safety
/// `w` must be a live handle; `sigma` must point to `len` indices.
#[no_mangle]
pub unsafe extern "C" fn symcone_word_push_permutation(
    w: *mut SymconeWord,
    sigma: *const usize,
    len: usize,
) -> SymconeStatus {
    guard(|| {
        if len > 0 {
            non_null!(sigma);
        }
        push(w, Generator::Permutation(slice(sigma, len).to_vec()))
    })
}

/// # Safety
/// `w`, `x` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn symcone_word_apply(
    w: *const SymconeWord,
    x: *const SymconeElement,
    out: *mut *mut SymconeElement,
) -> SymconeStatus {
    guard(|| {
        non_null!(w);
        non_null!(x);
        non_null!(out);
        let y = try_or_fail!((*w).0.apply(&(*x).0));
        emit(out, SymconeElement(y));
        SymconeStatus::Ok
    })
}

unsafe fn finish(
    result: Result<SolveReport, Error>,
    out: *mut *mut SymconeSolveReport,
) -> SymconeStatus {
    match result {
        Ok(r) => {
            emit(out, SymconeSolveReport(r));
            SymconeStatus::Ok
        }
        Err(Error::NonConvergence { report }) => {
            set_error(format!(
                "no convergence after {} iterations (residual {:e})",
                report.iterations, report.residual
            ));
            emit(out, SymconeSolveReport(*report));
            SymconeStatus::NonConvergence
        }
        Err(e) => fail(e),
    }
}

/// Solves `g(a) = a^p`, or `g(a^p) = a` when `corollary` is true.
///
/// `initial` may be NULL (start at the identity). On
/// [`SymconeStatus::NonConvergence`] a report is still written to `out`.
///
/// # Safety
/// `g` must be a live handle, `initial` NULL or a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn symcone_solve(
    g: *const SymconeWord,
    p: f64,
    tol: f64,
    max_iter: usize,
    initial: *const SymconeElement,
    corollary: bool,
    out: *mut *mut SymconeSolveReport,
) -> SymconeStatus {
    guard(|| {
        non_null!(g);
        non_null!(out);
        *out = ptr::null_mut();
        if !(p.is_finite() && p.abs() > 1.0) {
            set_error(format!("p = {p}: a unique solution needs |p| > 1"));
            return SymconeStatus::ExponentOutOfRange;
        }
        let mut cfg = try_or_fail!(SolveConfig::new(p))
            .with_tol(tol)
            .with_max_iter(max_iter);
        if let Some(x0) = initial.as_ref() {
            cfg = cfg.with_initial(x0.0.clone());
        }
        try_or_fail!(cfg.validate());
        let result = if corollary {
            symcone::solve_corollary(&(*g).0, &cfg)
        } else {
            symcone::solve(&(*g).0, &cfg)
        };
        finish(result, out)
    })
}

/// Solves `T^T A T = A^(2^k)` for SPD `A`; `t` is row-major `side x side`.
///
/// # Safety
/// `t` must point to `side * side` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn symcone_bushell(
    t: *const f64,
    side: usize,
    k: u32,
    tol: f64,
    max_iter: usize,
    out: *mut *mut SymconeSolveReport,
) -> SymconeStatus {
    guard(|| {
        non_null!(t);
        non_null!(out);
        *out = ptr::null_mut();
        let t = slice(t, side * side);
        finish(solve_bushell_with(t, side, k, tol, max_iter, None), out)
    })
}

/// # Safety
/// `r` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn symcone_report_free(r: *mut SymconeSolveReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// A new element handle holding the solution.
///
/// # Safety
/// `r` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn symcone_report_solution(
    r: *const SymconeSolveReport,
    out: *mut *mut SymconeElement,
) -> SymconeStatus {
    guard(|| {
        non_null!(r);
        non_null!(out);
        emit(out, SymconeElement((*r).0.solution.clone()));
        SymconeStatus::Ok
    })
}

/// # Safety
/// `r` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn symcone_report_iterations(r: *const SymconeSolveReport) -> usize {
    r.as_ref().map_or(0, |r| r.0.iterations)
}

/// # Safety
/// `r` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn symcone_report_residual(r: *const SymconeSolveReport) -> f64 {
    r.as_ref().map_or(f64::NAN, |r| r.0.residual)
}

/// # Safety
/// `r` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn symcone_report_contraction_estimate(r: *const SymconeSolveReport) -> f64 {
    r.as_ref().map_or(f64::NAN, |r| r.0.contraction_estimate)
}

/// # Safety
/// `r` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn symcone_report_converged(r: *const SymconeSolveReport) -> bool {
    r.as_ref().is_some_and(|r| r.0.converged)
}

/// # Safety
/// `r` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn symcone_report_trace_len(r: *const SymconeSolveReport) -> usize {
    r.as_ref().map_or(0, |r| r.0.distance_trace.len())
}

/// Copies `d(x_k, x_{k+1})` for each step into `buf`.
///
/// # Safety
/// `r` must be a live handle and `buf` must have room for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn symcone_report_trace(
    r: *const SymconeSolveReport,
    buf: *mut f64,
    len: usize,
) -> SymconeStatus {
    guard(|| {
        non_null!(r);
        non_null!(buf);
        let trace = &(*r).0.distance_trace;
        if len < trace.len() {
            set_error(format!("buffer holds {len} values, need {}", trace.len()));
            return SymconeStatus::InvalidArgument;
        }
        ptr::copy_nonoverlapping(trace.as_ptr(), buf, trace.len());
        SymconeStatus::Ok
    })
}
