mod common;

use common::{complex_in_disk, matrix, unit_complex};
use gybe::blocks::{BlockSolution, DiagBlock};
use gybe::equivalence::{apply_gauge, GaugeOp};
use gybe::registry;
use gybe::yang_baxter::{check_far_commutativity, gybe_residual, ybe_summation_residual};
use gybe::{check_gybe, ComplexMatrix, GybeSignature, RMatrix, Tolerance};
use proptest::prelude::*;

fn tol(v: f64) -> Tolerance {
    Tolerance::new(v).unwrap()
}

fn condition(q: &ComplexMatrix) -> f64 {
    q.frobenius_norm() * q.inverse().map(|i| i.frobenius_norm()).unwrap_or(f64::INFINITY)
}

fn diag_block() -> impl Strategy<Value = DiagBlock> {
    (complex_in_disk(), complex_in_disk()).prop_map(|(p, q)| DiagBlock::new(p, q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn scalar_gauge_keeps_solutions(k in 0usize..4, lambda in complex_in_disk(), grow in 0.5f64..2.0) {
        let r = &registry::fixed_231()[k];
        prop_assume!(lambda.norm() > 0.2);
        let lambda = lambda / lambda.norm() * grow;
        let scaled = apply_gauge(r, &GaugeOp::Scalar { lambda }).unwrap();
        let bound = 1e-12 * grow.powi(3).max(1.0);
        prop_assert!(check_gybe(&scaled, tol(bound)).unwrap().passed);
    }

    #[test]
    fn inverse_gauge_keeps_solutions(k in 0usize..4) {
        let r = &registry::fixed_231()[k];
        let inv = apply_gauge(r, &GaugeOp::Inverse).unwrap();
        prop_assert!(check_gybe(&inv, tol(1e-12)).unwrap().passed);
    }

    #[test]
    fn local_conjugation_keeps_solutions(k in 0usize..5, q in matrix(2)) {
        let kappa = condition(&q);
        prop_assume!(kappa < 6.0);
        let r = registry::resolve(["rowell", "xshape", "base1", "base2", "base3"][k]).unwrap();
        let conj = apply_gauge(&r, &GaugeOp::LocalConj { q }).unwrap();
        let bound = 1e-13 * kappa.powi(9);
        let report = check_gybe(&conj, tol(bound)).unwrap();
        prop_assert!(report.passed, "residual {} bound {}", report.residual, bound);
    }

    #[test]
    fn summation_form_matches_lifted_products(r in matrix(4)) {
        let lifted = gybe_residual(&r, GybeSignature::ybe(2)).unwrap();
        let summed = ybe_summation_residual(&r).unwrap();
        prop_assert!((lifted - summed).abs() <= 1e-12, "{lifted} vs {summed}");
    }

    #[test]
    fn diagonal_blocks_commute_far_apart(
        a in diag_block(), b in diag_block(), c in diag_block(), d in diag_block(),
        y1 in diag_block(), y2 in diag_block(), y3 in diag_block(), y4 in diag_block(),
    ) {
        let s = BlockSolution { a, b, c, d, y1, y2, y3, y4 };
        let Ok(r) = RMatrix::new(GybeSignature::new(2, 3, 1).unwrap(), s.matrix(), "diag") else {
            return Ok(());
        };
        let report = check_far_commutativity(&r, tol(1e-12)).unwrap();
        prop_assert!(report.passed, "residual {}", report.residual);
        prop_assert_eq!(report.vacuous, Some(false));
    }

    #[test]
    fn unit_scalar_leaves_residual_unchanged(k in 0usize..4, lambda in unit_complex()) {
        let r = &registry::fixed_231()[k];
        let scaled = apply_gauge(r, &GaugeOp::Scalar { lambda }).unwrap();
        let a = check_gybe(r, tol(1e-12)).unwrap().residual;
        let b = check_gybe(&scaled, tol(1e-12)).unwrap().residual;
        prop_assert!((a - b).abs() <= 1e-14);
    }
}

#[test]
fn vacuity_is_exactly_two_l_at_least_m() {
    for d in [2, 3] {
        for m in 2..=6 {
            for l in 1..m {
                let sig = GybeSignature::new(d, m, l).unwrap();
                assert_eq!(sig.far_commutativity_is_vacuous(), 2 * l >= m, "{sig}");
            }
        }
    }
    for (m, l) in [(2, 1), (3, 1), (3, 2), (4, 2), (4, 3)] {
        let sig = GybeSignature::new(2, m, l).unwrap();
        let r = RMatrix::new(sig, ComplexMatrix::identity(sig.matrix_size()), "id").unwrap();
        let report = check_far_commutativity(&r, tol(1e-12)).unwrap();
        assert_eq!(report.vacuous, Some(2 * l >= m), "{sig}");
    }
}

#[test]
fn non_diagonal_blocks_with_distinct_halves_fail_far_commutativity() {
    // X ⊕ Y with a full 2x2 block in X and X ≠ Y.
    let mut s = gybe::blocks::base_solution(gybe::blocks::Family::First).matrix();
    s[(0, 1)] = gybe::c(0.3, 0.0);
    let r = RMatrix::new(GybeSignature::new(2, 3, 1).unwrap(), s, "mixed").unwrap();
    assert!(!check_far_commutativity(&r, tol(1e-12)).unwrap().passed);
    assert!(matches!(
        gybe::braid::BraidRep::build(&r, 4, tol(1e-12)),
        Err(gybe::GybeError::Representation { .. })
    ));
}
