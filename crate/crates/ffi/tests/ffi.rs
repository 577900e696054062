use std::ffi::{CStr, CString};
use std::ptr;

use gybe_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(gybe_last_error()) }
        .to_string_lossy()
        .into_owned()
}

fn registry(id: &str) -> *mut GybeSolution {
    let id = CString::new(id).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { gybe_solution_from_registry(id.as_ptr(), &mut out) },
        GybeStatus::Ok
    );
    out
}

fn entries(s: *const GybeSolution) -> Vec<GybeComplex> {
    let n = unsafe { gybe_solution_size(s) };
    let mut buf = vec![GybeComplex { re: 0.0, im: 0.0 }; n * n];
    assert_eq!(
        unsafe { gybe_solution_entries(s, buf.as_mut_ptr(), buf.len()) },
        GybeStatus::Ok
    );
    buf
}

#[test]
fn registry_solution_checks_out() {
    let s = registry("rowell");
    let (mut passed, mut residual, mut unitary) = (false, f64::NAN, false);
    unsafe {
        assert_eq!(gybe_solution_size(s), 8);
        assert_eq!(
            gybe_solution_check(s, 1e-12, &mut passed, &mut residual),
            GybeStatus::Ok
        );
        assert!(passed && residual <= 1e-12);
        assert_eq!(gybe_solution_is_unitary(s, 1e-12, &mut unitary), GybeStatus::Ok);
        assert!(unitary);
        assert_eq!(
            gybe_solution_far_commutativity(s, 1e-12, &mut passed, &mut residual),
            GybeStatus::Ok
        );
        assert!(passed);
        gybe_solution_free(s);
    }
}

#[test]
fn matrices_round_trip_through_entries() {
    let s = registry("base2");
    let data = entries(s);
    let mut copy = ptr::null_mut();
    let mut passed = false;
    let mut residual = 0.0;
    unsafe {
        assert_eq!(
            gybe_solution_new(2, 3, 1, data.as_ptr(), data.len(), &mut copy),
            GybeStatus::Ok
        );
        assert_eq!(entries(copy), data);
        assert_eq!(
            gybe_solution_check(copy, 1e-12, &mut passed, &mut residual),
            GybeStatus::Ok
        );
        assert!(passed);
        gybe_solution_free(copy);
        gybe_solution_free(s);
    }
}

#[test]
fn families_and_general_members() {
    let mut s = ptr::null_mut();
    let mut t = ptr::null_mut();
    unsafe {
        assert_eq!(gybe_solution_family(3, std::f64::consts::PI, &mut s), GybeStatus::Ok);
        let one = GybeComplex { re: 1.0, im: 0.0 };
        let minus = GybeComplex { re: -1.0, im: 0.0 };
        assert_eq!(gybe_solution_general(3, one, minus, &mut t), GybeStatus::Ok);
        let (a, b) = (entries(s), entries(t));
        let diff = a
            .iter()
            .zip(&b)
            .map(|(x, y)| (x.re - y.re).hypot(x.im - y.im))
            .fold(0.0, f64::max);
        assert!(diff <= 1e-12);
        gybe_solution_free(s);
        gybe_solution_free(t);
    }
}

#[test]
fn braid_words_evaluate() {
    let s = registry("base1");
    let mut rep = ptr::null_mut();
    unsafe {
        assert_eq!(gybe_braid_rep_new(s, 3, 1e-12, &mut rep), GybeStatus::Ok);
        let dim = gybe_braid_rep_dim(rep);
        assert_eq!(dim, 16);
        let mut a = vec![GybeComplex { re: 0.0, im: 0.0 }; dim * dim];
        let mut b = a.clone();
        assert_eq!(
            gybe_braid_rep_evaluate(rep, [1, 2, 1].as_ptr(), 3, a.as_mut_ptr(), a.len()),
            GybeStatus::Ok
        );
        assert_eq!(
            gybe_braid_rep_evaluate(rep, [2, 1, 2].as_ptr(), 3, b.as_mut_ptr(), b.len()),
            GybeStatus::Ok
        );
        let diff = a
            .iter()
            .zip(&b)
            .map(|(x, y)| (x.re - y.re).hypot(x.im - y.im))
            .fold(0.0, f64::max);
        assert!(diff <= 1e-12);
        assert_eq!(
            gybe_braid_rep_evaluate(rep, ptr::null(), 0, a.as_mut_ptr(), a.len()),
            GybeStatus::Ok
        );
        assert_eq!(a[0], GybeComplex { re: 1.0, im: 0.0 });
        assert_eq!(
            gybe_braid_rep_evaluate(rep, [3].as_ptr(), 1, a.as_mut_ptr(), a.len()),
            GybeStatus::IndexOutOfRange
        );
        assert_eq!(
            gybe_braid_rep_evaluate(rep, [1].as_ptr(), 1, a.as_mut_ptr(), 4),
            GybeStatus::BufferTooSmall
        );
        gybe_braid_rep_free(rep);
        gybe_solution_free(s);
    }
}

#[test]
fn errors_are_reported() {
    let mut s = ptr::null_mut();
    unsafe {
        let bad = CString::new("nonesuch").unwrap();
        assert_ne!(gybe_solution_from_registry(bad.as_ptr(), &mut s), GybeStatus::Ok);
        assert!(s.is_null());
        assert!(!last_error().is_empty());

        assert_eq!(
            gybe_solution_from_registry(ptr::null(), &mut s),
            GybeStatus::NullPointer
        );
        assert_eq!(gybe_solution_family(4, 0.0, &mut s), GybeStatus::InvalidParameter);
        assert_eq!(gybe_solution_family(1, 0.0, ptr::null_mut()), GybeStatus::NullPointer);

        let entries = [GybeComplex { re: 1.0, im: 0.0 }; 4];
        assert_eq!(
            gybe_solution_new(2, 3, 1, entries.as_ptr(), 4, &mut s),
            GybeStatus::DimensionMismatch
        );
        assert!(last_error().contains("64"));

        let zeros = [GybeComplex { re: 0.0, im: 0.0 }; 16];
        assert_eq!(
            gybe_solution_new(2, 2, 1, zeros.as_ptr(), 16, &mut s),
            GybeStatus::Singular
        );

        let mut passed = false;
        let mut residual = 0.0;
        assert_eq!(
            gybe_solution_check(ptr::null(), 1e-12, &mut passed, &mut residual),
            GybeStatus::NullPointer
        );
        assert_eq!(gybe_solution_size(ptr::null()), 0);
        gybe_solution_free(ptr::null_mut());
        gybe_braid_rep_free(ptr::null_mut());
    }
}

#[test]
fn broken_relations_refuse_a_representation() {
    let mut data = entries(registry("base1"));
    data[1] = GybeComplex { re: 0.3, im: 0.0 };
    let mut s = ptr::null_mut();
    let mut rep = ptr::null_mut();
    unsafe {
        assert_eq!(
            gybe_solution_new(2, 3, 1, data.as_ptr(), data.len(), &mut s),
            GybeStatus::Ok
        );
        assert_eq!(gybe_braid_rep_new(s, 3, 1e-12, &mut rep), GybeStatus::Representation);
        assert!(rep.is_null());
        gybe_solution_free(s);
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/gybe.h")).unwrap();
    for name in [
        "gybe_last_error",
        "gybe_solution_from_registry",
        "gybe_solution_family",
        "gybe_solution_general",
        "gybe_solution_new",
        "gybe_solution_free",
        "gybe_solution_size",
        "gybe_solution_entries",
        "gybe_solution_check",
        "gybe_solution_far_commutativity",
        "gybe_solution_is_unitary",
        "gybe_braid_rep_new",
        "gybe_braid_rep_free",
        "gybe_braid_rep_dim",
        "gybe_braid_rep_evaluate",
        "GYBE_STATUS_OK",
        "typedef struct GybeSolution GybeSolution",
    ] {
        assert!(header.contains(name), "{name}");
    }
}
