//! C ABI for `trap-core`.
//!
//! Every fallible function returns a [`TrapStatus`] and writes its result
//! through an out-pointer. On failure a message is kept per thread and can
//! be read with [`trap_last_error_message`]. Models and spectra are opaque
//! handles released with their `_free` functions.

use std::cell::RefCell;
use std::ffi::{c_char, c_int};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use trap_core::eigensolver::{quartic_spectrum, EigenSolution, Grid1D};
use trap_core::electrostatics::{axial_potential, quartic_coefficients, transition_voltage, TrapGeometry, VoltageSet};
use trap_core::tunneling::{f_of_barrier, Regime};
use trap_core::units::dimensionless_barrier;
use trap_core::wells::{axial_frequency, shape_from_coefficients};
use trap_core::TrapError;

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrapStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Numerical = 3,
    SingleWell = 4,
    Unconfined = 5,
    DegenerateGeometry = 6,
    NoSolution = 7,
    Ambiguous = 8,
    NoFrequency = 9,
    Config = 10,
    OutOfRange = 11,
    Panic = 12,
}

/// Tunneling regime of the lowest pair.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrapRegime {
    Tunneling = 0,
    NoBoundPair = 1,
    BelowResolution = 2,
}

impl From<Regime> for TrapRegime {
    fn from(r: Regime) -> Self {
        match r {
            Regime::Tunneling => TrapRegime::Tunneling,
            Regime::NoBoundPair => TrapRegime::NoBoundPair,
            Regime::BelowResolution => TrapRegime::BelowResolution,
        }
    }
}

/// `U(δ) = u0 + a δ⁴ − b δ²` with `δ` the offset from the trap center in
/// units of r1; energies in joules.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct TrapQuartic {
    pub a: f64,
    pub b: f64,
    pub u0: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct TrapShape {
    /// Distance between the minima, m.
    pub well_distance: f64,
    /// Barrier height, J.
    pub barrier_height: f64,
    /// Non-zero when the barrier is below the quantum energy scale.
    pub sub_quantum: c_int,
}

/// Trap geometry and electrode voltages.
pub struct TrapModel {
    geometry: TrapGeometry,
    voltages: VoltageSet,
}

/// Lowest eigenpairs of the dimensionless double well.
pub struct TrapSpectrum {
    solution: EigenSolution,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(err: &TrapError) -> TrapStatus {
    match err {
        TrapError::Domain(_) | TrapError::Contract(_) => TrapStatus::Domain,
        TrapError::Numerical { .. } => TrapStatus::Numerical,
        TrapError::SingleWell { .. } => TrapStatus::SingleWell,
        TrapError::Unconfined { .. } => TrapStatus::Unconfined,
        TrapError::DegenerateGeometry { .. } => TrapStatus::DegenerateGeometry,
        TrapError::NoSolution(_) => TrapStatus::NoSolution,
        TrapError::Ambiguous(_) => TrapStatus::Ambiguous,
        TrapError::NoFrequency(_) => TrapStatus::NoFrequency,
        TrapError::Config { .. } | TrapError::Io(_) => TrapStatus::Config,
    }
}

/// Runs `f`, recording errors and containing panics.
fn guard<F: FnOnce() -> Result<(), (TrapStatus, String)>>(f: F) -> TrapStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TrapStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            TrapStatus::Panic
        }
    }
}

fn core<T>(r: trap_core::Result<T>) -> Result<T, (TrapStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (TrapStatus, String) {
    (TrapStatus::NullPointer, format!("{what} is null"))
}

/// Copies the calling thread's last error message into `buf` (always
/// NUL-terminated when `len > 0`) and returns the full message length.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn trap_last_error_message(buf: *mut c_char, len: usize) -> usize {
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

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn trap_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Creates a model; `r1` in meters, voltages in volts.
///
/// # Safety
/// `out` must be a valid pointer to a `TrapModel*`.
#[no_mangle]
pub unsafe extern "C" fn trap_model_new(
    r1: f64,
    r2_tilde: f64,
    zc_tilde: f64,
    v1: f64,
    v2: f64,
    v3: f64,
    out: *mut *mut TrapModel,
) -> TrapStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let model = TrapModel {
            geometry: core(TrapGeometry::new(r1, r2_tilde, zc_tilde))?,
            voltages: core(VoltageSet::new(v1, v2, v3))?,
        };
        *out = Box::into_raw(Box::new(model));
        Ok(())
    })
}

/// # Safety
/// `model` must be null or a handle from `trap_model_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn trap_model_free(model: *mut TrapModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// # Safety
/// `model` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn trap_model_set_v3(model: *mut TrapModel, v3: f64) -> TrapStatus {
    guard(|| {
        let m = model.as_mut().ok_or_else(|| null("model"))?;
        m.voltages = core(VoltageSet::new(m.voltages.v1, m.voltages.v2, v3))?;
        Ok(())
    })
}

/// On-axis potential in volts at `z_tilde = z / r1`.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn trap_model_potential(model: *const TrapModel, z_tilde: f64, out: *mut f64) -> TrapStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = core(axial_potential(z_tilde, &m.geometry, &m.voltages))?;
        Ok(())
    })
}

/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn trap_model_coefficients(model: *const TrapModel, out: *mut TrapQuartic) -> TrapStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let c = core(quartic_coefficients(&m.geometry, &m.voltages))?;
        *out = TrapQuartic {
            a: c.a,
            b: c.b,
            u0: c.u0,
        };
        Ok(())
    })
}

/// V3 at which the double well forms, for the model's V1 and V2.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn trap_model_transition_voltage(model: *const TrapModel, out: *mut f64) -> TrapStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = core(transition_voltage(&m.geometry, m.voltages.v1, m.voltages.v2))?;
        Ok(())
    })
}

/// Well distance and barrier; `TrapStatus::SingleWell` outside the
/// double-well regime.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn trap_model_shape(model: *const TrapModel, out: *mut TrapShape) -> TrapStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let c = core(quartic_coefficients(&m.geometry, &m.voltages))?;
        let s = core(shape_from_coefficients(&c, m.geometry.r1))?;
        *out = TrapShape {
            well_distance: s.well_distance,
            barrier_height: s.barrier_height,
            sub_quantum: c_int::from(s.sub_quantum),
        };
        Ok(())
    })
}

/// Classical axial frequency in Hz; distance in m, barrier in J.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn trap_classical_frequency(
    well_distance: f64,
    barrier_height: f64,
    out: *mut f64,
) -> TrapStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        if !(well_distance > 0.0 && barrier_height > 0.0) {
            return Err((TrapStatus::Domain, "well distance and barrier must be positive".into()));
        }
        *out = axial_frequency(well_distance, barrier_height);
        Ok(())
    })
}

/// Tunneling frequency in Hz. `regime` (optional) is always written when
/// the solve succeeds; `frequency` only in the tunneling regime, otherwise
/// the call returns `TrapStatus::NoFrequency`.
///
/// # Safety
/// `frequency` must be writable; `regime` null or writable.
#[no_mangle]
pub unsafe extern "C" fn trap_tunneling_frequency(
    well_distance: f64,
    barrier_height: f64,
    frequency: *mut f64,
    regime: *mut TrapRegime,
) -> TrapStatus {
    guard(|| {
        let frequency = frequency.as_mut().ok_or_else(|| null("frequency"))?;
        let eb_tilde = core(dimensionless_barrier(barrier_height, well_distance))?;
        let result = core(f_of_barrier(eb_tilde))?.with_length(well_distance);
        if let Some(r) = regime.as_mut() {
            *r = result.regime.into();
        }
        match result.tunneling_frequency {
            Some(f) => {
                *frequency = f;
                Ok(())
            }
            None => Err((
                TrapStatus::NoFrequency,
                format!("no tunneling frequency in regime {}", result.regime),
            )),
        }
    })
}

/// Lowest `levels` eigenpairs for barrier `eb_tilde` on `[-half_width,
/// half_width]` with `points` grid points (odd).
///
/// # Safety
/// `out` must be a valid pointer to a `TrapSpectrum*`.
#[no_mangle]
pub unsafe extern "C" fn trap_spectrum_new(
    eb_tilde: f64,
    levels: usize,
    half_width: f64,
    points: usize,
    out: *mut *mut TrapSpectrum,
) -> TrapStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let grid = core(Grid1D::new(half_width, points))?;
        let solution = core(quartic_spectrum(eb_tilde, levels, &grid))?;
        *out = Box::into_raw(Box::new(TrapSpectrum { solution }));
        Ok(())
    })
}

/// # Safety
/// `spectrum` must be null or a handle from `trap_spectrum_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn trap_spectrum_free(spectrum: *mut TrapSpectrum) {
    if !spectrum.is_null() {
        drop(Box::from_raw(spectrum));
    }
}

/// Number of levels, 0 for a null handle.
///
/// # Safety
/// `spectrum` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn trap_spectrum_levels(spectrum: *const TrapSpectrum) -> usize {
    spectrum.as_ref().map_or(0, |s| s.solution.eigenvalues.len())
}

/// Number of grid points, 0 for a null handle.
///
/// # Safety
/// `spectrum` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn trap_spectrum_points(spectrum: *const TrapSpectrum) -> usize {
    spectrum.as_ref().map_or(0, |s| s.solution.grid.n_points())
}

/// Eigenvalue `index` in units of ħ²/(2mL²), measured from the barrier top.
///
/// # Safety
/// `spectrum` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn trap_spectrum_eigenvalue(
    spectrum: *const TrapSpectrum,
    index: usize,
    out: *mut f64,
) -> TrapStatus {
    guard(|| {
        let s = spectrum.as_ref().ok_or_else(|| null("spectrum"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = *s
            .solution
            .eigenvalues
            .get(index)
            .ok_or_else(|| (TrapStatus::OutOfRange, format!("level {index} out of range")))?;
        Ok(())
    })
}

/// Copies eigenvector `index` (normalized so that Σφ²h = 1) into `buf`,
/// which must hold `trap_spectrum_points` values.
///
/// # Safety
/// `spectrum` must be a live handle; `buf` must point to `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn trap_spectrum_eigenvector(
    spectrum: *const TrapSpectrum,
    index: usize,
    buf: *mut f64,
    len: usize,
) -> TrapStatus {
    guard(|| {
        let s = spectrum.as_ref().ok_or_else(|| null("spectrum"))?;
        if buf.is_null() {
            return Err(null("buf"));
        }
        let v = s
            .solution
            .eigenvectors
            .get(index)
            .ok_or_else(|| (TrapStatus::OutOfRange, format!("level {index} out of range")))?;
        if len < v.len() {
            return Err((
                TrapStatus::OutOfRange,
                format!("buffer holds {len} values, need {}", v.len()),
            ));
        }
        ptr::copy_nonoverlapping(v.as_ptr(), buf, v.len());
        Ok(())
    })
}

/// Grid coordinate `ζ_j` in units of L.
///
/// # Safety
/// `spectrum` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn trap_spectrum_grid_point(
    spectrum: *const TrapSpectrum,
    index: usize,
    out: *mut f64,
) -> TrapStatus {
    guard(|| {
        let s = spectrum.as_ref().ok_or_else(|| null("spectrum"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        if index >= s.solution.grid.n_points() {
            return Err((TrapStatus::OutOfRange, format!("point {index} out of range")));
        }
        *out = s.solution.grid.point(index);
        Ok(())
    })
}
