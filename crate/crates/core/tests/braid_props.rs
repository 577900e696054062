mod common;

use gybe::braid::{BraidRep, BraidWord, StateVector};
use gybe::registry;
use gybe::{c, ComplexMatrix, Tolerance};
use proptest::prelude::*;

fn tol(v: f64) -> Tolerance {
    Tolerance::new(v).unwrap()
}

fn word(n: usize, max_len: usize) -> impl Strategy<Value = BraidWord> {
    let letter = (1..n as i64, any::<bool>()).prop_map(|(k, neg)| if neg { -k } else { k });
    prop::collection::vec(letter, 0..=max_len).prop_map(move |l| BraidWord::new(n, l).unwrap())
}

fn rep(id: &str, n: usize) -> BraidRep {
    BraidRep::build(&registry::resolve(id).unwrap(), n, tol(1e-12)).unwrap()
}

#[test]
fn registry_solutions_give_unitary_representations() {
    for id in ["rowell", "base1", "base2", "base3", "family2:theta=0.4"] {
        for n in 2..=5 {
            let r = rep(id, n);
            assert!(r.is_unitary(), "{id} n={n}");
            assert!(r.braid_residual() <= 1e-12, "{id} n={n}: {}", r.braid_residual());
            assert!(r.far_residual() <= 1e-12, "{id} n={n}: {}", r.far_residual());
            assert_eq!(r.dim(), 1 << (n + 1));
        }
    }
}

#[test]
fn xshape_gives_representations_up_to_five_strands() {
    for n in 2..=5 {
        let r = rep("xshape", n);
        assert!(r.braid_residual() <= 1e-12);
        assert!(r.far_residual() <= 1e-12);
    }
}

#[test]
fn braiding_gate_is_recognized_as_the_first_generator() {
    for id in ["rowell", "base1", "base2", "base3"] {
        let r = rep(id, 3);
        let u = r.generator(1).unwrap().clone();
        let (i, phase) = r.recognize_braiding_gate(&u, tol(1e-10)).unwrap();
        assert_eq!(i, 1, "{id}");
        assert!((phase - c(1.0, 0.0)).norm() <= 1e-10, "{id}");
    }
}

#[test]
fn relations_hold_as_words() {
    let r = rep("rowell", 4);
    let check = |a: &str, b: &str| {
        let x = r.evaluate_word(&a.parse().unwrap()).unwrap();
        let y = r.evaluate_word(&b.parse().unwrap()).unwrap();
        x.max_abs_diff(&y)
    };
    assert!(check("n=4: 1,2,1", "n=4: 2,1,2") <= 1e-12);
    assert!(check("n=4: 2,3,2", "n=4: 3,2,3") <= 1e-12);
    assert!(check("n=4: 1,3", "n=4: 3,1") <= 1e-12);
    assert!(check("n=4: 1,-1,2,-2", "n=4:") <= 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn evaluation_is_a_homomorphism(a in word(4, 8), b in word(4, 8)) {
        let r = rep("rowell", 4);
        let ab = r.evaluate_word(&a.concat(&b).unwrap()).unwrap();
        let prod = r.evaluate_word(&a).unwrap().matmul(&r.evaluate_word(&b).unwrap());
        prop_assert!(ab.max_abs_diff(&prod) <= 1e-10);
    }

    #[test]
    fn word_times_inverse_is_identity(w in word(3, 16)) {
        let r = rep("base2", 3);
        let id = r.evaluate_word(&w.concat(&w.inverse()).unwrap()).unwrap();
        prop_assert!(id.max_abs_diff(&ComplexMatrix::identity(r.dim())) <= 1e-10);
    }

    #[test]
    fn state_application_matches_matrix_product(w in word(3, 10), k in 0usize..16) {
        let r = rep("base1", 3);
        let s = StateVector::basis(r.dim(), k).unwrap();
        let out = r.apply_to_state(&w, &s).unwrap();
        let direct = r.evaluate_word(&w).unwrap().matmul(&s.to_matrix());
        prop_assert!(out.to_matrix().max_abs_diff(&direct) <= 1e-10);
        prop_assert!((out.norm() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn words_survive_text_round_trip(w in word(5, 16)) {
        let back: BraidWord = w.to_string().parse().unwrap();
        prop_assert_eq!(back, w);
    }
}

#[test]
fn malformed_words_are_rejected() {
    for text in ["", "n=1: 1", "n=3: 3", "n=3: 0", "n=3: 1,x", "3: 1,2"] {
        assert!(text.parse::<BraidWord>().is_err(), "{text:?}");
    }
}

#[test]
fn non_normalized_states_are_rejected() {
    assert!(StateVector::new(vec![c(1.0, 0.0), c(1.0, 0.0)]).is_err());
    let r = rep("rowell", 2);
    let wrong_dim = StateVector::basis(16, 0).unwrap();
    assert!(r.apply_to_state(&"n=2: 1".parse().unwrap(), &wrong_dim).is_err());
}
