#![allow(dead_code)]

use gybe::{Complex, ComplexMatrix};
use proptest::prelude::*;

pub fn complex_in_disk() -> impl Strategy<Value = Complex> {
    (0.0f64..1.0, 0.0f64..std::f64::consts::TAU).prop_map(|(r, t)| Complex::from_polar(r.sqrt(), t))
}

pub fn unit_complex() -> impl Strategy<Value = Complex> {
    (0.0f64..std::f64::consts::TAU).prop_map(gybe::cis)
}

pub fn matrix(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec(complex_in_disk(), n * n).prop_map(move |v| ComplexMatrix::new(n, n, v).unwrap())
}

/// Gram-Schmidt on the columns of `m`; `None` if they are nearly dependent.
pub fn orthonormalize(m: &ComplexMatrix) -> Option<ComplexMatrix> {
    let n = m.rows();
    let mut cols: Vec<Vec<Complex>> = Vec::new();
    for j in 0..n {
        let mut v: Vec<Complex> = (0..n).map(|i| m[(i, j)]).collect();
        for u in &cols {
            let dot: Complex = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= dot * y;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-3 {
            return None;
        }
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    Some(ComplexMatrix::from_fn(n, n, |i, j| cols[j][i]))
}

pub fn unitary(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    matrix(n).prop_filter_map("dependent columns", |m| orthonormalize(&m))
}
