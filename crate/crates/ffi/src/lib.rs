//! C ABI over the `gybe` library.
//!
//! Solutions and braid representations are opaque heap handles created by the
//! `*_new`/constructor functions and released with the matching `*_free`.
//! Every fallible call returns a [`GybeStatus`]; on failure a description is
//! available from [`gybe_last_error`] on the same thread. Matrices cross the
//! boundary as row-major arrays of [`GybeComplex`].

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use gybe::blocks::{family_solution, general_solution, Family, FamilyParams, GeneralParams};
use gybe::braid::{BraidRep, BraidWord};
use gybe::yang_baxter::check_far_commutativity;
use gybe::{check_gybe, Complex, ComplexMatrix, GybeError, GybeSignature, RMatrix, Tolerance};

/// Status code returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GybeStatus {
    Ok = 0,
    NullPointer = 1,
    DimensionMismatch = 2,
    NotSquare = 3,
    Singular = 4,
    NoConvergence = 5,
    IndexOutOfRange = 6,
    InvalidParameter = 7,
    Representation = 8,
    Domain = 9,
    Parse = 10,
    BufferTooSmall = 11,
    Panic = 12,
}

/// A complex number, layout-compatible with `double _Complex`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GybeComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex> for GybeComplex {
    fn from(z: Complex) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<GybeComplex> for Complex {
    fn from(z: GybeComplex) -> Self {
        Complex::new(z.re, z.im)
    }
}

/// Opaque solution handle.
pub struct GybeSolution(RMatrix);

/// Opaque braid group representation handle.
pub struct GybeBraidRep(BraidRep);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let text = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn status_of(e: &GybeError) -> GybeStatus {
    match e {
        GybeError::DimensionMismatch(_) => GybeStatus::DimensionMismatch,
        GybeError::NotSquare { .. } => GybeStatus::NotSquare,
        GybeError::Singular { .. } => GybeStatus::Singular,
        GybeError::NoConvergence { .. } => GybeStatus::NoConvergence,
        GybeError::IndexOutOfRange { .. } => GybeStatus::IndexOutOfRange,
        GybeError::InvalidParameter(_) => GybeStatus::InvalidParameter,
        GybeError::Representation { .. } => GybeStatus::Representation,
        GybeError::Domain(_) => GybeStatus::Domain,
        GybeError::Parse(_) => GybeStatus::Parse,
    }
}

enum Fail {
    Lib(GybeError),
    Status(GybeStatus, &'static str),
}

impl From<GybeError> for Fail {
    fn from(e: GybeError) -> Self {
        Fail::Lib(e)
    }
}

const NULL: Fail = Fail::Status(GybeStatus::NullPointer, "null pointer argument");

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> GybeStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GybeStatus::Ok,
        Ok(Err(Fail::Lib(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            GybeStatus::Panic
        }
    }
}

unsafe fn get<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(NULL)
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(NULL);
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(NULL);
    }
    *out = value;
    Ok(())
}

unsafe fn copy_matrix(m: &ComplexMatrix, buf: *mut GybeComplex, len: usize) -> Result<(), Fail> {
    let entries = m.entries();
    if buf.is_null() {
        return Err(NULL);
    }
    if len < entries.len() {
        return Err(Fail::Status(GybeStatus::BufferTooSmall, "output buffer too small"));
    }
    for (k, &z) in entries.iter().enumerate() {
        *buf.add(k) = z.into();
    }
    Ok(())
}

/// Message for the last failure on this thread; empty if none. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gybe_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Resolves a registry id such as `rowell` or `family2:theta=0.5`.
#[no_mangle]
pub unsafe extern "C" fn gybe_solution_from_registry(id: *const c_char, out: *mut *mut GybeSolution) -> GybeStatus {
    guard(|| {
        if id.is_null() {
            return Err(NULL);
        }
        let id = CStr::from_ptr(id)
            .to_str()
            .map_err(|_| Fail::Status(GybeStatus::Parse, "id is not UTF-8"))?;
        put(out, GybeSolution(gybe::registry::resolve(id)?))
    })
}

/// Member of family `family` (1, 2 or 3) at angle `theta` in [0, pi].
#[no_mangle]
pub unsafe extern "C" fn gybe_solution_family(family: u8, theta: f64, out: *mut *mut GybeSolution) -> GybeStatus {
    guard(|| {
        let p = FamilyParams::new(Family::from_index(family)?, theta)?;
        put(out, GybeSolution(family_solution(&p)?))
    })
}

/// Member of family `family` with unit-modulus parameters `alpha`, `beta`.
#[no_mangle]
pub unsafe extern "C" fn gybe_solution_general(
    family: u8,
    alpha: GybeComplex,
    beta: GybeComplex,
    out: *mut *mut GybeSolution,
) -> GybeStatus {
    guard(|| {
        let p = GeneralParams::new(Family::from_index(family)?, alpha.into(), beta.into())?;
        put(out, GybeSolution(general_solution(&p)?))
    })
}

/// Wraps a row-major `d^m x d^m` matrix as a candidate for signature `(d, m, l)`.
#[no_mangle]
pub unsafe extern "C" fn gybe_solution_new(
    d: usize,
    m: usize,
    l: usize,
    entries: *const GybeComplex,
    len: usize,
    out: *mut *mut GybeSolution,
) -> GybeStatus {
    guard(|| {
        if entries.is_null() {
            return Err(NULL);
        }
        let sig = GybeSignature::new(d, m, l)?;
        let n = sig.matrix_size();
        if len != n * n {
            return Err(GybeError::DimensionMismatch(format!("expected {} entries, got {len}", n * n)).into());
        }
        let data = std::slice::from_raw_parts(entries, len)
            .iter()
            .map(|&z| z.into())
            .collect();
        let matrix = ComplexMatrix::new(n, n, data)?;
        put(out, GybeSolution(RMatrix::new(sig, matrix, "ffi")?))
    })
}

#[no_mangle]
pub unsafe extern "C" fn gybe_solution_free(s: *mut GybeSolution) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Side length of the matrix, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn gybe_solution_size(s: *const GybeSolution) -> usize {
    s.as_ref().map_or(0, |s| s.0.size())
}

/// Copies the matrix row-major into `buf`, which must hold `size * size` entries.
#[no_mangle]
pub unsafe extern "C" fn gybe_solution_entries(
    s: *const GybeSolution,
    buf: *mut GybeComplex,
    len: usize,
) -> GybeStatus {
    guard(|| copy_matrix(&get(s)?.0.matrix, buf, len))
}

/// Largest entry of `LSL - SLS` and whether it is within `tol`.
#[no_mangle]
pub unsafe extern "C" fn gybe_solution_check(
    s: *const GybeSolution,
    tol: f64,
    passed: *mut bool,
    residual: *mut f64,
) -> GybeStatus {
    guard(|| {
        let report = check_gybe(&get(s)?.0, Tolerance::new(tol)?)?;
        write_out(passed, report.passed)?;
        write_out(residual, report.residual)
    })
}

/// Far commutativity of the braid generators; vacuous signatures pass.
#[no_mangle]
pub unsafe extern "C" fn gybe_solution_far_commutativity(
    s: *const GybeSolution,
    tol: f64,
    passed: *mut bool,
    residual: *mut f64,
) -> GybeStatus {
    guard(|| {
        let report = check_far_commutativity(&get(s)?.0, Tolerance::new(tol)?)?;
        write_out(passed, report.passed)?;
        write_out(residual, report.residual)
    })
}

#[no_mangle]
pub unsafe extern "C" fn gybe_solution_is_unitary(s: *const GybeSolution, tol: f64, unitary: *mut bool) -> GybeStatus {
    guard(|| {
        let check = get(s)?.0.matrix.is_unitary(Tolerance::new(tol)?)?;
        write_out(unitary, check.unitary)
    })
}

/// Representation of the braid group on `n` strands; fails with
/// `Representation` if a braid relation does not hold within `tol`.
#[no_mangle]
pub unsafe extern "C" fn gybe_braid_rep_new(
    s: *const GybeSolution,
    n: usize,
    tol: f64,
    out: *mut *mut GybeBraidRep,
) -> GybeStatus {
    guard(|| {
        let rep = BraidRep::build(&get(s)?.0, n, Tolerance::new(tol)?)?;
        put(out, GybeBraidRep(rep))
    })
}

#[no_mangle]
pub unsafe extern "C" fn gybe_braid_rep_free(r: *mut GybeBraidRep) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Dimension of the representation space, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn gybe_braid_rep_dim(r: *const GybeBraidRep) -> usize {
    r.as_ref().map_or(0, |r| r.0.dim())
}

/// Image of the word `letters` (`k` for the k-th generator, `-k` for its
/// inverse), written row-major into `buf` of `dim * dim` entries.
#[no_mangle]
pub unsafe extern "C" fn gybe_braid_rep_evaluate(
    r: *const GybeBraidRep,
    letters: *const i64,
    len: usize,
    buf: *mut GybeComplex,
    buf_len: usize,
) -> GybeStatus {
    guard(|| {
        let rep = &get(r)?.0;
        let letters = if len == 0 {
            Vec::new()
        } else if letters.is_null() {
            return Err(NULL);
        } else {
            std::slice::from_raw_parts(letters, len).to_vec()
        };
        let word = BraidWord::new(rep.strands(), letters)?;
        copy_matrix(&rep.evaluate_word(&word)?, buf, buf_len)
    })
}
