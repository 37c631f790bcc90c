//! C interface to `fracqm`.
//!
//! Objects are opaque heap handles created by `fqm_*_new` style calls and
//! released with the matching `fqm_*_free`. Every fallible call returns an
//! [`FqmStatus`]; the message of the most recent failure on the calling thread
//! is available through [`fqm_last_error`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fracqm::foxh::{self, SeriesControl};
use fracqm::{dynamics, spectra, FqmError, Grid1D, WaveFunction};

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FqmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    GridMismatch = 3,
    Representation = 4,
    Potential = 5,
    NonConvergence = 6,
    Bracketing = 7,
    Eigen = 8,
    Overflow = 9,
    BufferTooSmall = 10,
    Panic = 11,
}

/// Kinematic parameters (alpha, D, hbar).
pub struct FqmParams(fracqm::FqmParams);

/// A wave function on a periodic grid.
pub struct FqmWave(WaveFunction);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &FqmError) -> FqmStatus {
    match e {
        FqmError::InvalidParameter { .. } => FqmStatus::InvalidParameter,
        FqmError::GridMismatch(_) => FqmStatus::GridMismatch,
        FqmError::Representation { .. } => FqmStatus::Representation,
        FqmError::Potential(_) => FqmStatus::Potential,
        FqmError::NonConvergence { .. } => FqmStatus::NonConvergence,
        FqmError::Bracketing { .. } => FqmStatus::Bracketing,
        FqmError::Eigen(_) => FqmStatus::Eigen,
        FqmError::Overflow(_) => FqmStatus::Overflow,
    }
}

fn fail(status: FqmStatus, msg: impl Into<String>) -> FqmStatus {
    set_error(msg.into());
    status
}

// Runs `f`, turning library errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), FqmStatus>) -> FqmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FqmStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(FqmStatus::Panic, "internal panic"),
    }
}

fn lib<T>(r: fracqm::Result<T>) -> Result<T, FqmStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

fn nonnull<T>(p: *const T, what: &str) -> Result<(), FqmStatus> {
    if p.is_null() {
        Err(fail(FqmStatus::NullPointer, format!("`{what}` is null")))
    } else {
        Ok(())
    }
}

/// Message of the last failure on this thread, NUL terminated. Empty when
/// nothing has failed. Valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn fqm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version string, NUL terminated, static.
#[no_mangle]
pub extern "C" fn fqm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Creates parameters; alpha must lie in (1, 2], D and hbar must be positive.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn fqm_params_new(alpha: f64, d_alpha: f64, hbar: f64, out: *mut *mut FqmParams) -> FqmStatus {
    guard(|| {
        nonnull(out, "out")?;
        let p = lib(fracqm::FqmParams::new(alpha, d_alpha, hbar))?;
        *out = Box::into_raw(Box::new(FqmParams(p)));
        Ok(())
    })
}

/// # Safety
/// `p` must be null or a handle from [`fqm_params_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fqm_params_free(p: *mut FqmParams) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Normalized Gaussian packet on an `n_points` grid of length `length`
/// centred at `x_center`.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn fqm_wave_gaussian(
    n_points: usize,
    length: f64,
    x_center: f64,
    hbar: f64,
    x0: f64,
    sigma: f64,
    p0: f64,
    out: *mut *mut FqmWave,
) -> FqmStatus {
    guard(|| {
        nonnull(out, "out")?;
        let g = lib(Grid1D::new(n_points, length, x_center))?;
        if !(sigma > 0.0) {
            return Err(fail(FqmStatus::InvalidParameter, "sigma must be positive"));
        }
        if !(hbar > 0.0) {
            return Err(fail(FqmStatus::InvalidParameter, "hbar must be positive"));
        }
        *out = Box::into_raw(Box::new(FqmWave(WaveFunction::gaussian(g, hbar, x0, sigma, p0))));
        Ok(())
    })
}

/// Wave function from interleaved (re, im) samples, `2 * n_points` doubles.
///
/// # Safety
/// `values` must point to `2 * n_points` readable doubles; `out` must be valid
/// for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn fqm_wave_from_samples(
    n_points: usize,
    length: f64,
    x_center: f64,
    hbar: f64,
    values: *const f64,
    out: *mut *mut FqmWave,
) -> FqmStatus {
    guard(|| {
        nonnull(values, "values")?;
        nonnull(out, "out")?;
        let g = lib(Grid1D::new(n_points, length, x_center))?;
        let raw = std::slice::from_raw_parts(values, 2 * n_points);
        let v = raw.chunks_exact(2).map(|c| fracqm::Complex64::new(c[0], c[1])).collect();
        *out = Box::into_raw(Box::new(FqmWave(lib(WaveFunction::new(g, v, hbar))?)));
        Ok(())
    })
}

/// # Safety
/// `w` must be null or a live wave handle.
#[no_mangle]
pub unsafe extern "C" fn fqm_wave_free(w: *mut FqmWave) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// Number of grid points, 0 for a null handle.
///
/// # Safety
/// `w` must be null or a live wave handle.
#[no_mangle]
pub unsafe extern "C" fn fqm_wave_len(w: *const FqmWave) -> usize {
    w.as_ref().map_or(0, |w| w.0.len())
}

/// Norm, sqrt(sum |psi|^2 dx).
///
/// # Safety
/// `w` must be a live wave handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn fqm_wave_norm(w: *const FqmWave, out: *mut f64) -> FqmStatus {
    guard(|| {
        nonnull(w, "wave")?;
        nonnull(out, "out")?;
        *out = (*w).0.norm();
        Ok(())
    })
}

/// Position density |psi(x_j)|^2 into `buf`, which holds `len` doubles.
///
/// # Safety
/// `w` must be a live wave handle and `buf` writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn fqm_wave_density(w: *const FqmWave, buf: *mut f64, len: usize) -> FqmStatus {
    guard(|| {
        nonnull(w, "wave")?;
        nonnull(buf, "buf")?;
        let d = (*w).0.density();
        if len < d.len() {
            return Err(fail(FqmStatus::BufferTooSmall, format!("need {} doubles, got {len}", d.len())));
        }
        ptr::copy_nonoverlapping(d.as_ptr(), buf, d.len());
        Ok(())
    })
}

/// Propagates `w` in place by the free evolution over time `t`.
///
/// # Safety
/// `w` and `p` must be live handles.
#[no_mangle]
pub unsafe extern "C" fn fqm_wave_evolve_free(w: *mut FqmWave, p: *const FqmParams, t: f64) -> FqmStatus {
    guard(|| {
        nonnull(w, "wave")?;
        nonnull(p, "params")?;
        if !t.is_finite() {
            return Err(fail(FqmStatus::InvalidParameter, "t must be finite"));
        }
        let next = dynamics::evolve_free(&(*w).0, t, &(*p).0);
        (*w).0 = next.to_position();
        Ok(())
    })
}

/// Free propagator K(x, t) with default series control.
///
/// # Safety
/// `p` must be a live handle; `re` and `im` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fqm_free_kernel(p: *const FqmParams, x: f64, t: f64, re: *mut f64, im: *mut f64) -> FqmStatus {
    guard(|| {
        nonnull(p, "params")?;
        nonnull(re, "re")?;
        nonnull(im, "im")?;
        let k = lib(foxh::free_kernel_1d(x, t, &(*p).0, &SeriesControl::default()))?;
        *re = k.value.re;
        *im = k.value.im;
        Ok(())
    })
}

/// Free thermal density matrix rho(x, beta).
///
/// # Safety
/// `p` must be a live handle; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn fqm_free_density(p: *const FqmParams, x: f64, beta: f64, out: *mut f64) -> FqmStatus {
    guard(|| {
        nonnull(p, "params")?;
        nonnull(out, "out")?;
        *out = lib(foxh::free_density_matrix_1d(x, beta, &(*p).0, &SeriesControl::default()))?;
        Ok(())
    })
}

/// Infinite well levels E_1..E_len of half-width `a` into `buf`.
///
/// # Safety
/// `p` must be a live handle; `buf` writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn fqm_infinite_well_levels(p: *const FqmParams, a: f64, buf: *mut f64, len: usize) -> FqmStatus {
    guard(|| {
        nonnull(p, "params")?;
        nonnull(buf, "buf")?;
        let n = u32::try_from(len).map_err(|_| fail(FqmStatus::InvalidParameter, "len too large"))?;
        let s = lib(spectra::infinite_well_levels(a, n, &(*p).0))?;
        for (i, l) in s.levels.iter().enumerate() {
            *buf.add(i) = l.energy;
        }
        Ok(())
    })
}

/// Bohr levels E_1..E_len of charge `z` with coupling `e2` into `buf`.
///
/// # Safety
/// `p` must be a live handle; `buf` writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn fqm_bohr_levels(p: *const FqmParams, z: f64, e2: f64, buf: *mut f64, len: usize) -> FqmStatus {
    guard(|| {
        nonnull(p, "params")?;
        nonnull(buf, "buf")?;
        let n = u32::try_from(len).map_err(|_| fail(FqmStatus::InvalidParameter, "len too large"))?;
        let atom = lib(spectra::bohr_atom(z, e2, n, &(*p).0))?;
        ptr::copy_nonoverlapping(atom.energies.as_ptr(), buf, atom.energies.len());
        Ok(())
    })
}

/// Bound-state energy of the attractive delta well of strength `gamma`.
///
/// # Safety
/// `p` must be a live handle; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn fqm_delta_well_energy(p: *const FqmParams, gamma: f64, out: *mut f64) -> FqmStatus {
    guard(|| {
        nonnull(p, "params")?;
        nonnull(out, "out")?;
        *out = lib(spectra::delta_well_energy(gamma, &(*p).0))?;
        Ok(())
    })
}
