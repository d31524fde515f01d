//! C ABI over `sublevel-core`.
//!
//! Objects are opaque handles created by `*_parse` (or returned by
//! operations) and released with the matching `*_free`. Every fallible
//! function returns an [`SblStatus`]; on failure a description is available
//! from [`sbl_last_error_message`] on the same thread. Strings returned
//! through `char **` are owned by the caller and released with
//! [`sbl_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sublevel_core::operators::{apply_recipe, parse_recipe, type_of_recipe, OperatorError, OperatorRecipe};
use sublevel_core::pfaffian::khovanskii_bound;
use sublevel_core::symbolic::{diff, parse, zero_test, CompiledExpr, Expr, ZeroVerdict};
use sublevel_core::trees::{parse_tree, stats, to_dot, DTree};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SblStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidArgument = 4,
    EvaluationError = 5,
    TooLarge = 6,
    Panic = 7,
}

/// Parsed expression.
pub struct SblExpr(Expr);
/// Parsed d-tree.
pub struct SblTree(DTree);
/// Parsed operator recipe.
pub struct SblRecipe(OperatorRecipe);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).ok());
}

fn fail(status: SblStatus, msg: impl Into<String>) -> SblStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> SblStatus) -> SblStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(SblStatus::Panic, "internal panic"),
    }
}

unsafe fn c_str<'a>(p: *const c_char) -> Result<&'a str, SblStatus> {
    if p.is_null() {
        return Err(fail(SblStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(SblStatus::InvalidUtf8, "string is not UTF-8"))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> SblStatus {
    *out = Box::into_raw(Box::new(value));
    SblStatus::Ok
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> SblStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            SblStatus::Ok
        }
        Err(_) => fail(SblStatus::EvaluationError, "string contains NUL"),
    }
}

fn operator_status(e: &OperatorError) -> SblStatus {
    match e {
        OperatorError::Syntax { .. } => SblStatus::ParseError,
        OperatorError::TooLarge { .. } => SblStatus::TooLarge,
        _ => SblStatus::InvalidArgument,
    }
}

/// Message for the last failure on this thread, or NULL. Valid until the
/// next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn sbl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn sbl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse `text` over variables `x1..x{dim}`; the result is simplified.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sbl_expr_parse(text: *const c_char, dim: usize, out: *mut *mut SblExpr) -> SblStatus {
    guard(|| {
        if out.is_null() {
            return fail(SblStatus::NullPointer, "null output");
        }
        let t = match c_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse(t, dim) {
            Ok(e) => put(out, SblExpr(e)),
            Err(e) => fail(SblStatus::ParseError, e.to_string()),
        }
    })
}

/// # Safety
/// `e` must be NULL or a handle from this library, not freed before.
#[no_mangle]
pub unsafe extern "C" fn sbl_expr_free(e: *mut SblExpr) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// # Safety
/// `e` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sbl_expr_to_string(e: *const SblExpr, out: *mut *mut c_char) -> SblStatus {
    guard(|| {
        if e.is_null() || out.is_null() {
            return fail(SblStatus::NullPointer, "null argument");
        }
        put_string(out, (*e).0.to_string())
    })
}

/// Evaluate at `x[0..len]`.
///
/// # Safety
/// `e` must be a live handle, `x` must point to `len` doubles, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sbl_expr_eval(e: *const SblExpr, x: *const f64, len: usize, out: *mut f64) -> SblStatus {
    guard(|| {
        if e.is_null() || out.is_null() || (x.is_null() && len > 0) {
            return fail(SblStatus::NullPointer, "null argument");
        }
        let expr = &(*e).0;
        if expr.max_var() > len {
            return fail(
                SblStatus::InvalidArgument,
                format!("expression uses x{} but {len} coordinates given", expr.max_var()),
            );
        }
        let xs = if len == 0 { &[][..] } else { std::slice::from_raw_parts(x, len) };
        let v = CompiledExpr::new(expr).eval(xs);
        if !v.is_finite() {
            return fail(SblStatus::EvaluationError, "value is not finite");
        }
        *out = v;
        SblStatus::Ok
    })
}

/// `∂e/∂x_i`, `i` starting at 1.
///
/// # Safety
/// `e` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sbl_expr_diff(e: *const SblExpr, i: usize, out: *mut *mut SblExpr) -> SblStatus {
    guard(|| {
        if e.is_null() || out.is_null() {
            return fail(SblStatus::NullPointer, "null argument");
        }
        if i == 0 {
            return fail(SblStatus::InvalidArgument, "variables are numbered from 1");
        }
        put(out, SblExpr(diff(&(*e).0, i)))
    })
}

/// Writes 1 if `e` is identically zero, 0 if not, -1 if undecided.
///
/// # Safety
/// `e` must be a live handle and `verdict` writable.
#[no_mangle]
pub unsafe extern "C" fn sbl_expr_zero_test(
    e: *const SblExpr,
    trials: usize,
    seed: u64,
    verdict: *mut i32,
) -> SblStatus {
    guard(|| {
        if e.is_null() || verdict.is_null() {
            return fail(SblStatus::NullPointer, "null argument");
        }
        *verdict = match zero_test(&(*e).0, trials, seed) {
            ZeroVerdict::Zero { .. } => 1,
            ZeroVerdict::Nonzero { .. } => 0,
            ZeroVerdict::Inconclusive => -1,
        };
        SblStatus::Ok
    })
}

/// Parse a tree such as `((3,2),(1,3))`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sbl_tree_parse(text: *const c_char, out: *mut *mut SblTree) -> SblStatus {
    guard(|| {
        if out.is_null() {
            return fail(SblStatus::NullPointer, "null output");
        }
        let t = match c_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_tree(t) {
            Ok(g) => put(out, SblTree(g)),
            Err(e) => fail(SblStatus::ParseError, e.to_string()),
        }
    })
}

/// # Safety
/// `g` must be NULL or a handle from this library, not freed before.
#[no_mangle]
pub unsafe extern "C" fn sbl_tree_free(g: *mut SblTree) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// `#G`, `G^(1..m)` into `leaf_counts[0..m]`, depth and vertex count.
/// Any output pointer other than `leaf_counts` may be NULL.
///
/// # Safety
/// `g` must be a live handle; `leaf_counts` must hold `m` entries.
#[no_mangle]
pub unsafe extern "C" fn sbl_tree_stats(
    g: *const SblTree,
    m: usize,
    order: *mut usize,
    leaf_counts: *mut usize,
    depth: *mut usize,
    vertex_count: *mut usize,
) -> SblStatus {
    guard(|| {
        if g.is_null() || (leaf_counts.is_null() && m > 0) {
            return fail(SblStatus::NullPointer, "null argument");
        }
        let s = match stats(&(*g).0, m) {
            Ok(s) => s,
            Err(e) => return fail(SblStatus::InvalidArgument, e.to_string()),
        };
        if !order.is_null() {
            *order = s.order;
        }
        if m > 0 {
            std::slice::from_raw_parts_mut(leaf_counts, m).copy_from_slice(&s.leaf_counts);
        }
        if !depth.is_null() {
            *depth = s.depth;
        }
        if !vertex_count.is_null() {
            *vertex_count = s.vertex_count;
        }
        SblStatus::Ok
    })
}

/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sbl_tree_to_dot(g: *const SblTree, out: *mut *mut c_char) -> SblStatus {
    guard(|| {
        if g.is_null() || out.is_null() {
            return fail(SblStatus::NullPointer, "null argument");
        }
        put_string(out, to_dot(&(*g).0))
    })
}

/// Parse a recipe such as `det[1,2](det[1](id),det[2](id))`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sbl_recipe_parse(text: *const c_char, out: *mut *mut SblRecipe) -> SblStatus {
    guard(|| {
        if out.is_null() {
            return fail(SblStatus::NullPointer, "null output");
        }
        let t = match c_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_recipe(t) {
            Ok(r) => put(out, SblRecipe(r)),
            Err(e) => fail(operator_status(&e), e.to_string()),
        }
    })
}

/// # Safety
/// `r` must be NULL or a handle from this library, not freed before.
#[no_mangle]
pub unsafe extern "C" fn sbl_recipe_free(r: *mut SblRecipe) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// `LF` in dimension `d`.
///
/// # Safety
/// `r`, `f` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sbl_recipe_apply(
    r: *const SblRecipe,
    f: *const SblExpr,
    d: usize,
    out: *mut *mut SblExpr,
) -> SblStatus {
    guard(|| {
        if r.is_null() || f.is_null() || out.is_null() {
            return fail(SblStatus::NullPointer, "null argument");
        }
        match apply_recipe(&(*r).0, &(*f).0, d) {
            Ok(e) => put(out, SblExpr(e)),
            Err(e) => fail(operator_status(&e), e.to_string()),
        }
    })
}

/// Type `(α, β)`; `beta` must hold `d` entries.
///
/// # Safety
/// `r` must be a live handle, `alpha` writable, `beta` `d` entries long.
#[no_mangle]
pub unsafe extern "C" fn sbl_recipe_type(r: *const SblRecipe, d: usize, alpha: *mut usize, beta: *mut usize) -> SblStatus {
    guard(|| {
        if r.is_null() || alpha.is_null() || (beta.is_null() && d > 0) {
            return fail(SblStatus::NullPointer, "null argument");
        }
        match type_of_recipe(&(*r).0, d) {
            Ok(t) => {
                *alpha = t.alpha;
                std::slice::from_raw_parts_mut(beta, d).copy_from_slice(&t.beta);
                SblStatus::Ok
            }
            Err(e) => fail(operator_status(&e), e.to_string()),
        }
    })
}

/// Khovanskii bound as a decimal string (it can exceed 64 bits).
///
/// # Safety
/// `betas` must hold `d` entries and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn sbl_khovanskii_bound(
    d: usize,
    r: usize,
    alpha: usize,
    betas: *const usize,
    out: *mut *mut c_char,
) -> SblStatus {
    guard(|| {
        if out.is_null() || (betas.is_null() && d > 0) {
            return fail(SblStatus::NullPointer, "null argument");
        }
        let b = if d == 0 { &[][..] } else { std::slice::from_raw_parts(betas, d) };
        match khovanskii_bound(d, r, alpha, b) {
            Ok(v) => put_string(out, v.to_string()),
            Err(e) => fail(SblStatus::InvalidArgument, e.to_string()),
        }
    })
}
