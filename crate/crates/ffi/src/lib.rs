//! C ABI for `snowflake-core`.
//!
//! Every function returns an [`SfStatus`]; results go through out-pointers.
//! Points are passed in interleaved coordinates `(x_1, ..., x_{2n}, w)` with
//! `u_j = x_{2j-1}` and `v_j = x_{2j}`. Handles are created by `*_new` and
//! released by the matching `*_free`.

use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use snowflake_core::embeddings::ReprDistance;
use snowflake_core::integrate::{self, mc, McConfig};
use snowflake_core::{EmbeddingParams, Error, GroupPoint, WordBall};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    DimensionMismatch = 3,
    Overflow = 4,
    BudgetExceeded = 5,
    NonConvergence = 6,
    Degenerate = 7,
    Io = 8,
    Parse = 9,
    Panic = 10,
}

impl From<&Error> for SfStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::DimensionMismatch { .. } => SfStatus::DimensionMismatch,
            Error::InvalidParameter(_) => SfStatus::InvalidParameter,
            Error::Overflow => SfStatus::Overflow,
            Error::BudgetExceeded { .. } => SfStatus::BudgetExceeded,
            Error::NonConvergence { .. } => SfStatus::NonConvergence,
            Error::Degenerate(_) => SfStatus::Degenerate,
            Error::Io(_) => SfStatus::Io,
            Error::Parse(_) => SfStatus::Parse,
        }
    }
}

/// Opaque `(p, ε)` parameter set with derived `n` and `α`.
pub struct SfParams(EmbeddingParams);

/// Opaque word ball of the discrete Heisenberg group.
pub struct SfWordBall(WordBall);

fn guard<F: FnOnce() -> Result<(), SfStatus>>(f: F) -> SfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SfStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => SfStatus::Panic,
    }
}

fn lift<T>(r: snowflake_core::Result<T>) -> Result<T, SfStatus> {
    r.map_err(|e| SfStatus::from(&e))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), SfStatus> {
    if out.is_null() {
        return Err(SfStatus::NullPointer);
    }
    out.write(value);
    Ok(())
}

unsafe fn point(coords: *const f64, len: usize) -> Result<GroupPoint, SfStatus> {
    if coords.is_null() {
        return Err(SfStatus::NullPointer);
    }
    lift(GroupPoint::from_interleaved(std::slice::from_raw_parts(
        coords, len,
    )))
}

unsafe fn params_ref<'a>(params: *const SfParams) -> Result<&'a EmbeddingParams, SfStatus> {
    params.as_ref().map(|p| &p.0).ok_or(SfStatus::NullPointer)
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn sf_status_message(status: SfStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        SfStatus::Ok => b"ok\0",
        SfStatus::NullPointer => b"null pointer argument\0",
        SfStatus::InvalidParameter => b"invalid parameter\0",
        SfStatus::DimensionMismatch => b"dimension mismatch\0",
        SfStatus::Overflow => b"integer overflow\0",
        SfStatus::BudgetExceeded => b"memory budget exceeded\0",
        SfStatus::NonConvergence => b"quadrature did not converge\0",
        SfStatus::Degenerate => b"degenerate input\0",
        SfStatus::Io => b"io error\0",
        SfStatus::Parse => b"parse error\0",
        SfStatus::Panic => b"internal panic\0",
    };
    s.as_ptr().cast()
}

/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn sf_params_new(p: f64, epsilon: f64, out: *mut *mut SfParams) -> SfStatus {
    guard(|| {
        let params = lift(EmbeddingParams::from_p_epsilon(p, epsilon))?;
        write(out, Box::into_raw(Box::new(SfParams(params))))
    })
}

/// # Safety
/// `params` must come from `sf_params_new` and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn sf_params_free(params: *mut SfParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

/// # Safety
/// `params` must be a live handle; `n` and `alpha` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_params_derived(
    params: *const SfParams,
    n: *mut usize,
    alpha: *mut f64,
) -> SfStatus {
    guard(|| {
        let p = params_ref(params)?;
        write(n, p.n())?;
        write(alpha, p.alpha())
    })
}

/// # Safety
/// `x` must point to `len` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_koranyi_norm(x: *const f64, len: usize, out: *mut f64) -> SfStatus {
    guard(|| write(out, point(x, len)?.koranyi_norm()))
}

/// # Safety
/// `x` and `y` must each point to `len` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_koranyi_distance(
    x: *const f64,
    y: *const f64,
    len: usize,
    out: *mut f64,
) -> SfStatus {
    guard(|| {
        let d = lift(point(x, len)?.koranyi_distance(&point(y, len)?))?;
        write(out, d)
    })
}

/// `I(s, w)` with its error bound.
///
/// # Safety
/// `value` and `abs_error` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_lambda_integral(
    s: f64,
    w: f64,
    p: f64,
    epsilon: f64,
    tol: f64,
    value: *mut f64,
    abs_error: *mut f64,
) -> SfStatus {
    guard(|| {
        let r = lift(integrate::lambda_integral(s, w, p, epsilon, tol))?;
        write(value, r.value)?;
        write(abs_error, r.abs_error)
    })
}

/// Lebesgue volume of the Korányi unit ball in `H_n`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_ball_volume(n: usize, out: *mut f64) -> SfStatus {
    guard(|| write(out, lift(integrate::ball_volume(n))?))
}

/// Distance between the images of `x` and `y` under the representation embedding.
///
/// # Safety
/// `params` must be a live handle; `x`, `y` must each point to `len` doubles;
/// `value` and `abs_error` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_repr_distance(
    params: *const SfParams,
    x: *const f64,
    y: *const f64,
    len: usize,
    tol: f64,
    value: *mut f64,
    abs_error: *mut f64,
) -> SfStatus {
    guard(|| {
        let metric = lift(ReprDistance::new(*params_ref(params)?, tol))?;
        let r = lift(metric.distance(&point(x, len)?, &point(y, len)?))?;
        write(value, r.value)?;
        write(abs_error, r.abs_error)
    })
}

/// Monte Carlo estimate of `‖T(x)‖_p^p`; `x` lives in `H_n` with `n` taken
/// from `params`.
///
/// # Safety
/// `params` must be a live handle; `x` must point to `len` doubles; `mean`
/// and `std_error` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_kernel_norm(
    params: *const SfParams,
    x: *const f64,
    len: usize,
    samples: u64,
    seed: u64,
    mean: *mut f64,
    std_error: *mut f64,
) -> SfStatus {
    guard(|| {
        let est = lift(mc::mc_kernel_norm(
            &point(x, len)?,
            params_ref(params)?,
            &McConfig::new(samples, seed),
        ))?;
        write(mean, est.mean)?;
        write(std_error, est.std_error)
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_word_ball_new(
    radius: u32,
    budget: usize,
    out: *mut *mut SfWordBall,
) -> SfStatus {
    guard(|| {
        let ball = lift(WordBall::build(radius, budget))?;
        write(out, Box::into_raw(Box::new(SfWordBall(ball))))
    })
}

/// `|B(r)|` for `r` up to the radius the ball was built with.
///
/// # Safety
/// `ball` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_word_ball_size(
    ball: *const SfWordBall,
    r: u32,
    out: *mut usize,
) -> SfStatus {
    guard(|| {
        let ball = ball.as_ref().ok_or(SfStatus::NullPointer)?;
        let size = ball.0.size_at(r).ok_or(SfStatus::InvalidParameter)?;
        write(out, size)
    })
}

/// # Safety
/// `ball` must come from `sf_word_ball_new` and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn sf_word_ball_free(ball: *mut SfWordBall) {
    if !ball.is_null() {
        drop(Box::from_raw(ball));
    }
}
