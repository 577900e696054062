mod common;

use common::{matrix, unitary};
use gybe::linalg::multiset_distance;
use gybe::{c, Complex, ComplexMatrix, Tolerance};
use proptest::prelude::*;

fn tol(v: f64) -> Tolerance {
    Tolerance::new(v).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mixed_product(a in matrix(2), b in matrix(4), cc in matrix(2), d in matrix(4)) {
        let lhs = a.kron(&b).matmul(&cc.kron(&d));
        let rhs = a.matmul(&cc).kron(&b.matmul(&d));
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
    }

    #[test]
    fn kron_is_associative(a in matrix(2), b in matrix(2), cc in matrix(2)) {
        let lhs = a.kron(&b).kron(&cc);
        let rhs = a.kron(&b.kron(&cc));
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-15);
    }

    #[test]
    fn direct_sum_of_unitaries_is_unitary(x in unitary(4), y in unitary(2)) {
        let s = x.direct_sum(&y).unwrap();
        prop_assert!(s.is_unitary(tol(1e-12)).unwrap().unitary);
    }

    #[test]
    fn direct_sum_with_non_unitary_is_not_unitary(x in unitary(4), y in matrix(4), scale in 1.1f64..3.0) {
        // Scaling a unitary by a real factor other than 1 breaks unitarity.
        let y_bad = x.scale(c(scale, 0.0));
        prop_assert!(!x.direct_sum(&y_bad).unwrap().is_unitary(tol(1e-9)).unwrap().unitary);
        prop_assert!(!y_bad.direct_sum(&x).unwrap().is_unitary(tol(1e-9)).unwrap().unitary);
        let random = y.direct_sum(&x).unwrap();
        prop_assert_eq!(
            random.is_unitary(tol(1e-9)).unwrap().unitary,
            y.is_unitary(tol(1e-9)).unwrap().unitary
        );
    }

    #[test]
    fn unitary_eigenvalues_lie_on_the_circle(u in unitary(4)) {
        for z in u.eigenvalues().unwrap() {
            prop_assert!((z.norm() - 1.0).abs() <= 1e-8, "{z}");
        }
    }

    #[test]
    fn eigenvalue_product_is_determinant(m in matrix(4)) {
        let prod: Complex = m.eigenvalues().unwrap().into_iter().product();
        prop_assert!((prod - m.determinant().unwrap()).norm() <= 1e-8);
    }

    #[test]
    fn inverse_times_matrix_is_identity(u in unitary(4), m in matrix(4)) {
        // Well-conditioned input: a unitary plus a small perturbation.
        let a = &u + &m.scale(c(0.1, 0.0));
        let inv = a.inverse().unwrap();
        prop_assert!(a.matmul(&inv).max_abs_diff(&ComplexMatrix::identity(4)) <= 1e-12);
    }

    #[test]
    fn json_round_trip(m in matrix(3)) {
        let text = serde_json::to_string(&m).unwrap();
        let back: ComplexMatrix = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, m);
    }
}

#[test]
fn eigenvalues_of_similar_matrices_agree() {
    let spectrum = [c(1.0, 0.0), c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)];
    let d = ComplexMatrix::diag(&spectrum);
    let p = ComplexMatrix::from_real_rows(&[
        &[1.0, 2.0, 0.0, 0.0],
        &[0.0, 1.0, 0.0, 1.0],
        &[1.0, 0.0, 1.0, 0.0],
        &[0.0, 0.0, 1.0, 1.0],
    ])
    .unwrap();
    let m = p.inverse().unwrap().matmul(&d).matmul(&p);
    let ev = m.eigenvalues().unwrap();
    assert!(multiset_distance(&ev, &spectrum) < 1e-8);
}
