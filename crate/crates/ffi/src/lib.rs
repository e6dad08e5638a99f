//! C ABI for `hwm`.
//!
//! Objects are opaque handles created by `hwm_*_new`-style functions and
//! released with the matching `hwm_*_free`. Every fallible call returns an
//! [`HwmStatus`]; on failure the message is available from
//! [`hwm_last_error_message`] on the same thread. Output pointers are only
//! written on success.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use hwm::momenta::{self, Operator};
use hwm::num_complex::Complex64;
use hwm::specfun::{self, MathieuEigen, Parity};
use hwm::spectral::{self, OamSpectrum, RingSpectrum, Window};
use hwm::waves::{sample_grid, FieldGrid, GridSpec, Wave};
use hwm::{fieldio, HwmError};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HwmStatus {
    Ok = 0,
    InvalidArgument = 1,
    Range = 2,
    Domain = 3,
    EigenSolver = 4,
    Numerical = 5,
    UndefinedMean = 6,
    ConeMismatch = 7,
    Format = 8,
    Io = 9,
    NullPointer = 10,
    BufferTooSmall = 11,
    Panic = 12,
}

impl From<&HwmError> for HwmStatus {
    fn from(e: &HwmError) -> Self {
        match e {
            HwmError::InvalidParameter(_) => HwmStatus::InvalidArgument,
            HwmError::Range { .. } => HwmStatus::Range,
            HwmError::Domain(_) => HwmStatus::Domain,
            HwmError::EigenSolver { .. } => HwmStatus::EigenSolver,
            HwmError::NumericalConsistency(_) => HwmStatus::Numerical,
            HwmError::UndefinedMean => HwmStatus::UndefinedMean,
            HwmError::ConeMismatch { .. } => HwmStatus::ConeMismatch,
            HwmError::Sample { source, .. } => HwmStatus::from(source.as_ref()),
            HwmError::Format { .. } => HwmStatus::Format,
            HwmError::Io { .. } => HwmStatus::Io,
        }
    }
}

/// Sampled complex field.
pub struct HwmField(FieldGrid);
/// Angular spectrum on the ring of transverse wavevectors.
pub struct HwmRing(RingSpectrum);
/// Topological-charge amplitudes.
pub struct HwmOam(OamSpectrum);
/// Mathieu characteristic value and coefficients.
pub struct HwmMathieu(MathieuEigen);

/// Grid-oracle operators for [`hwm_grid_mean`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HwmOperator {
    Lz = 0,
    Px = 1,
    Py = 2,
    /// `l_z² + f² p_x²`, using the `f` argument.
    Elliptic = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HwmWindow {
    None = 0,
    Hann = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HwmParity {
    Even = 0,
    Odd = 1,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let msg = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = msg);
}

struct Failure(HwmStatus, String);

impl From<HwmError> for Failure {
    fn from(e: HwmError) -> Self {
        Failure(HwmStatus::from(&e), e.to_string())
    }
}

type FfiResult = Result<(), Failure>;

fn null(what: &str) -> Failure {
    Failure(HwmStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, converting errors and panics to a status.
fn guard(body: impl FnOnce() -> FfiResult) -> HwmStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            HwmStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            HwmStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> FfiResult {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        Failure(
            HwmStatus::InvalidArgument,
            format!("{what} is not valid UTF-8"),
        )
    })
}

/// Copies complex values as interleaved `(re, im)` doubles into `buf` of
/// `len` doubles.
unsafe fn copy_complex(values: &[Complex64], buf: *mut f64, len: usize) -> FfiResult {
    if buf.is_null() {
        return Err(null("buffer"));
    }
    if len < 2 * values.len() {
        return Err(Failure(
            HwmStatus::BufferTooSmall,
            format!("buffer holds {len} doubles, {} needed", 2 * values.len()),
        ));
    }
    let out = std::slice::from_raw_parts_mut(buf, 2 * values.len());
    for (pair, v) in out.chunks_exact_mut(2).zip(values) {
        pair[0] = v.re;
        pair[1] = v.im;
    }
    Ok(())
}

/// Message of the most recent failure on this thread; empty after a
/// success. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn hwm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// `J_n(x)` for `|n| ≤ 200`, `|x| ≤ 1e4`.
///
/// # Safety
/// `out` must be valid for writing one `double`.
#[no_mangle]
pub unsafe extern "C" fn hwm_bessel_j(n: i32, x: f64, out: *mut f64) -> HwmStatus {
    guard(|| write_out(out, specfun::bessel_j(n, x)?, "out"))
}

/// Solves the Mathieu eigen-system of order `n` and the given parity.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn hwm_mathieu_new(
    parity: HwmParity,
    n: u32,
    q: f64,
    out: *mut *mut HwmMathieu,
) -> HwmStatus {
    guard(|| {
        let parity = match parity {
            HwmParity::Even => Parity::Even,
            HwmParity::Odd => Parity::Odd,
        };
        let eigen = specfun::mathieu_eigen(parity, n, q)?;
        write_out(out, Box::into_raw(Box::new(HwmMathieu(eigen))), "out")
    })
}

/// # Safety
/// `m` must come from [`hwm_mathieu_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hwm_mathieu_free(m: *mut HwmMathieu) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Characteristic value `a_n(q)` or `b_n(q)`.
///
/// # Safety
/// `m` must be a live handle and `out` valid for one `double`.
#[no_mangle]
pub unsafe extern "C" fn hwm_mathieu_char_value(m: *const HwmMathieu, out: *mut f64) -> HwmStatus {
    guard(|| write_out(out, deref(m, "handle")?.0.char_value, "out"))
}

/// Number of stored coefficients (indexed by harmonic).
///
/// # Safety
/// `m` must be a live handle and `out` valid for one `size_t`.
#[no_mangle]
pub unsafe extern "C" fn hwm_mathieu_coeff_count(
    m: *const HwmMathieu,
    out: *mut usize,
) -> HwmStatus {
    guard(|| write_out(out, deref(m, "handle")?.0.coeffs.len(), "out"))
}

/// Copies the coefficients, indexed by harmonic `j`, into `buf`.
///
/// # Safety
/// `m` must be a live handle and `buf` valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn hwm_mathieu_coeffs(
    m: *const HwmMathieu,
    buf: *mut f64,
    len: usize,
) -> HwmStatus {
    guard(|| {
        let coeffs = &deref(m, "handle")?.0.coeffs;
        if buf.is_null() {
            return Err(null("buffer"));
        }
        if len < coeffs.len() {
            return Err(Failure(
                HwmStatus::BufferTooSmall,
                format!("buffer holds {len} doubles, {} needed", coeffs.len()),
            ));
        }
        std::slice::from_raw_parts_mut(buf, coeffs.len()).copy_from_slice(coeffs);
        Ok(())
    })
}

/// Angular function `ce_n(η, q)` or `se_n(η, q)`.
///
/// # Safety
/// `m` must be a live handle and `out` valid for one `double`.
#[no_mangle]
pub unsafe extern "C" fn hwm_mathieu_angular(
    m: *const HwmMathieu,
    eta: f64,
    out: *mut f64,
) -> HwmStatus {
    guard(|| write_out(out, deref(m, "handle")?.0.angular(eta), "out"))
}

/// Samples the wave described by `label` (for example
/// `"bessel k=1 theta=0.5 n=2"`) on an `nx × ny` grid centered on the axis.
///
/// # Safety
/// `label` must be a nul-terminated string and `out` valid for one pointer.
#[no_mangle]
pub unsafe extern "C" fn hwm_field_generate(
    label: *const c_char,
    nx: usize,
    ny: usize,
    dx: f64,
    dy: f64,
    z: f64,
    out: *mut *mut HwmField,
) -> HwmStatus {
    guard(|| {
        let wave: Wave = c_str(label, "label")?.parse()?;
        if nx < 2 || ny < 2 {
            return Err(Failure(
                HwmStatus::InvalidArgument,
                format!("grid {nx}x{ny} is too small"),
            ));
        }
        let field = sample_grid(&wave, &GridSpec::centered(nx, ny, dx, dy, z))?;
        write_out(out, Box::into_raw(Box::new(HwmField(field))), "out")
    })
}

/// Reads an HWMF1 field file.
///
/// # Safety
/// `path` must be a nul-terminated string and `out` valid for one pointer.
#[no_mangle]
pub unsafe extern "C" fn hwm_field_read(path: *const c_char, out: *mut *mut HwmField) -> HwmStatus {
    guard(|| {
        let field = fieldio::read_field(c_str(path, "path")?)?;
        write_out(out, Box::into_raw(Box::new(HwmField(field))), "out")
    })
}

/// Writes an HWMF1 field file.
///
/// # Safety
/// `field` must be a live handle and `path` a nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn hwm_field_write(field: *const HwmField, path: *const c_char) -> HwmStatus {
    guard(|| {
        Ok(fieldio::write_field(
            &deref(field, "field")?.0,
            c_str(path, "path")?,
        )?)
    })
}

/// # Safety
/// `field` must be a live handle; `nx` and `ny` valid for one `size_t` each.
#[no_mangle]
pub unsafe extern "C" fn hwm_field_dims(
    field: *const HwmField,
    nx: *mut usize,
    ny: *mut usize,
) -> HwmStatus {
    guard(|| {
        let f = &deref(field, "field")?.0;
        if nx.is_null() || ny.is_null() {
            return Err(null("dimension output"));
        }
        nx.write(f.nx);
        ny.write(f.ny);
        Ok(())
    })
}

/// Copies samples as interleaved `(re, im)` doubles, row-major with `y`
/// outermost. `len` counts doubles and must be at least `2·nx·ny`.
///
/// # Safety
/// `field` must be a live handle and `buf` valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn hwm_field_values(
    field: *const HwmField,
    buf: *mut f64,
    len: usize,
) -> HwmStatus {
    guard(|| copy_complex(&deref(field, "field")?.0.values, buf, len))
}

/// # Safety
/// `field` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hwm_field_free(field: *mut HwmField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Ring spectrum of a field at `ring_samples` azimuths.
///
/// # Safety
/// `field` must be a live handle and `out` valid for one pointer.
#[no_mangle]
pub unsafe extern "C" fn hwm_ring_from_field(
    field: *const HwmField,
    ring_samples: usize,
    window: HwmWindow,
    out: *mut *mut HwmRing,
) -> HwmStatus {
    guard(|| {
        let window = match window {
            HwmWindow::None => Window::None,
            HwmWindow::Hann => Window::Hann,
        };
        let ring =
            spectral::ring_spectrum_from_grid(&deref(field, "field")?.0, ring_samples, window)?;
        write_out(out, Box::into_raw(Box::new(HwmRing(ring))), "out")
    })
}

/// # Safety
/// `ring` must be a live handle and `out` valid for one `size_t`.
#[no_mangle]
pub unsafe extern "C" fn hwm_ring_len(ring: *const HwmRing, out: *mut usize) -> HwmStatus {
    guard(|| write_out(out, deref(ring, "ring")?.0.len(), "out"))
}

/// Interleaved `(re, im)` ring samples; `len` counts doubles.
///
/// # Safety
/// `ring` must be a live handle and `buf` valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn hwm_ring_samples(
    ring: *const HwmRing,
    buf: *mut f64,
    len: usize,
) -> HwmStatus {
    guard(|| copy_complex(&deref(ring, "ring")?.0.samples, buf, len))
}

/// `(2π/M) Σ|φ_m|²`.
///
/// # Safety
/// `ring` must be a live handle and `out` valid for one `double`.
#[no_mangle]
pub unsafe extern "C" fn hwm_ring_parseval_norm(ring: *const HwmRing, out: *mut f64) -> HwmStatus {
    guard(|| write_out(out, spectral::parseval_norm(&deref(ring, "ring")?.0), "out"))
}

/// # Safety
/// `ring` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hwm_ring_free(ring: *mut HwmRing) {
    if !ring.is_null() {
        drop(Box::from_raw(ring));
    }
}

/// Charge amplitudes for `n_min..=n_max`.
///
/// # Safety
/// `ring` must be a live handle and `out` valid for one pointer.
#[no_mangle]
pub unsafe extern "C" fn hwm_oam_from_ring(
    ring: *const HwmRing,
    n_min: i32,
    n_max: i32,
    out: *mut *mut HwmOam,
) -> HwmStatus {
    guard(|| {
        let spec = spectral::oam_spectrum(&deref(ring, "ring")?.0, n_min, n_max)?;
        write_out(out, Box::into_raw(Box::new(HwmOam(spec))), "out")
    })
}

/// Interleaved `(re, im)` amplitudes from `n_min` upward; `len` counts doubles.
///
/// # Safety
/// `oam` must be a live handle and `buf` valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn hwm_oam_coeffs(
    oam: *const HwmOam,
    buf: *mut f64,
    len: usize,
) -> HwmStatus {
    guard(|| copy_complex(&deref(oam, "oam")?.0.coeffs, buf, len))
}

/// `Σ|c_n|²`.
///
/// # Safety
/// `oam` must be a live handle and `out` valid for one `double`.
#[no_mangle]
pub unsafe extern "C" fn hwm_oam_norm(oam: *const HwmOam, out: *mut f64) -> HwmStatus {
    guard(|| write_out(out, deref(oam, "oam")?.0.norm, "out"))
}

/// `Σ n|c_n|² / Σ|c_n|²`.
///
/// # Safety
/// `oam` must be a live handle and `out` valid for one `double`.
#[no_mangle]
pub unsafe extern "C" fn hwm_oam_mean_charge(oam: *const HwmOam, out: *mut f64) -> HwmStatus {
    guard(|| write_out(out, momenta::mean_charge(&deref(oam, "oam")?.0)?, "out"))
}

/// # Safety
/// `oam` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hwm_oam_free(oam: *mut HwmOam) {
    if !oam.is_null() {
        drop(Box::from_raw(oam));
    }
}

/// Finite-difference Rayleigh quotient of `op` on the field. `f` is used by
/// [`HwmOperator::Elliptic`] only.
///
/// # Safety
/// `field` must be a live handle and `out` valid for one `double`.
#[no_mangle]
pub unsafe extern "C" fn hwm_grid_mean(
    field: *const HwmField,
    op: HwmOperator,
    f: f64,
    out: *mut f64,
) -> HwmStatus {
    guard(|| {
        let op = match op {
            HwmOperator::Lz => Operator::Lz,
            HwmOperator::Px => Operator::Px,
            HwmOperator::Py => Operator::Py,
            HwmOperator::Elliptic => Operator::Elliptic { f },
        };
        write_out(
            out,
            momenta::grid_mean(&deref(field, "field")?.0, op)?,
            "out",
        )
    })
}
