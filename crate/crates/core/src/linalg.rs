//! Dense complex matrices.
//!
//! Everything in the crate is expressed through [`ComplexMatrix`]: R-matrices,
//! their 4x4 and 2x2 blocks, lifted braid generators and state vectors. Sizes
//! stay small (at most 2^10 per side), so storage is a plain row-major `Vec`.
//!
//! Matrices are compared with the max-abs entry norm, which matches the
//! entrywise reading of the Yang-Baxter type equations checked elsewhere.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{GybeError, Result};

pub use num_complex::Complex64 as Complex;

/// Pivot magnitude below which a matrix is treated as singular.
pub const PIVOT_THRESHOLD: f64 = 1e-13;

/// Largest side length accepted by [`ComplexMatrix::eigenvalues`].
pub const MAX_EIGEN_SIZE: usize = 16;

/// Largest side length a constructed matrix may have.
pub const MAX_DIMENSION: usize = 1 << 10;

#[inline]
pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

/// `e^{i theta}`.
#[inline]
pub fn cis(theta: f64) -> Complex {
    Complex::from_polar(1.0, theta)
}

/// Non-negative threshold on the max-abs entry norm.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Tolerance(f64);

impl Tolerance {
    /// Default for exact, closed-form constructions.
    pub const EXACT: Tolerance = Tolerance(1e-12);
    /// Default for numerically searched solutions.
    pub const SEARCH: Tolerance = Tolerance(1e-11);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value >= 0.0 {
            Ok(Tolerance(value))
        } else {
            Err(GybeError::InvalidParameter(format!(
                "tolerance must be a finite non-negative number, got {value}"
            )))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn accepts(self, residual: f64) -> bool {
        residual <= self.0
    }

    /// Tolerance multiplied by a non-negative factor.
    pub fn scaled(self, factor: f64) -> Self {
        Tolerance(self.0 * factor.abs())
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::EXACT
    }
}

impl TryFrom<f64> for Tolerance {
    type Error = GybeError;
    fn try_from(value: f64) -> Result<Self> {
        Tolerance::new(value)
    }
}

impl From<Tolerance> for f64 {
    fn from(t: Tolerance) -> f64 {
        t.0
    }
}

/// Result of a unitarity test: the residual `max|M M^dagger - I|` and the verdict.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitaryCheck {
    pub residual: f64,
    pub unitary: bool,
}

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(GybeError::DimensionMismatch(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(GybeError::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Complex::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from equally long rows.
    pub fn from_rows(rows: &[Vec<Complex>]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(GybeError::DimensionMismatch("ragged rows".into()));
        }
        Self::new(n, m, rows.concat())
    }

    /// Builds a matrix from real rows.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<Complex>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn diag(entries: &[Complex]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &e) in entries.iter().enumerate() {
            m.data[i * n + i] = e;
        }
        m
    }

    /// Column vector.
    pub fn column(entries: Vec<Complex>) -> Result<Self> {
        let n = entries.len();
        Self::new(n, 1, entries)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex] {
        &self.data
    }

    pub fn into_entries(self) -> Vec<Complex> {
        self.data
    }

    pub fn ensure_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(GybeError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// Copy of the `size`x`size` sub-block whose top-left corner is `(row, col)`.
    pub fn block(&self, row: usize, col: usize, size: usize) -> Self {
        assert!(row + size <= self.rows && col + size <= self.cols);
        Self::from_fn(size, size, |i, j| self[(row + i, col + j)])
    }

    pub fn scale(&self, s: Complex) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.conj()).collect(),
        }
    }

    pub fn trace(&self) -> Complex {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |self - other|` over entries; infinite when shapes differ.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    /// Matrix product; panics on inner dimension mismatch (use [`Self::try_mul`]
    /// for fallible callers).
    pub fn matmul(&self, rhs: &Self) -> Self {
        self.try_mul(rhs).expect("inner dimensions must agree")
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(GybeError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let (n, k, m) = (self.rows, self.cols, rhs.cols);
        let mut out = vec![Complex::new(0.0, 0.0); n * m];
        // Lifted generators are mostly zeros, so skipping them pays off.
        for i in 0..n {
            let out_row = &mut out[i * m..(i + 1) * m];
            for p in 0..k {
                let a = self.data[i * k + p];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let rhs_row = &rhs.data[p * m..(p + 1) * m];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Ok(Self {
            rows: n,
            cols: m,
            data: out,
        })
    }

    /// Kronecker product: block `(i, j)` of the result is `self[i, j] * rhs`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        let mut data = vec![Complex::new(0.0, 0.0); rows * cols];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for k in 0..rhs.rows {
                    let row = i * rhs.rows + k;
                    for l in 0..rhs.cols {
                        data[row * cols + j * rhs.cols + l] = a * rhs[(k, l)];
                    }
                }
            }
        }
        Self { rows, cols, data }
    }

    /// `I_left ⊗ self ⊗ I_right`.
    pub fn pad_identity(&self, left: usize, right: usize) -> Self {
        let mut out = self.clone();
        if right > 1 {
            out = out.kron(&Self::identity(right));
        }
        if left > 1 {
            out = Self::identity(left).kron(&out);
        }
        out
    }

    /// Block-diagonal matrix with `self` upper-left and `other` lower-right.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        let a = self.ensure_square()?;
        let b = other.ensure_square()?;
        let n = a + b;
        let mut m = Self::zeros(n, n);
        for i in 0..a {
            for j in 0..a {
                m.data[i * n + j] = self[(i, j)];
            }
        }
        for i in 0..b {
            for j in 0..b {
                m.data[(a + i) * n + a + j] = other[(i, j)];
            }
        }
        Ok(m)
    }

    /// Residual `max|M M^dagger - I|` and whether it is within `tol`.
    pub fn is_unitary(&self, tol: Tolerance) -> Result<UnitaryCheck> {
        let n = self.ensure_square()?;
        let prod = self.matmul(&self.dagger());
        let residual = prod.max_abs_diff(&Self::identity(n));
        Ok(UnitaryCheck {
            residual,
            unitary: tol.accepts(residual),
        })
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.ensure_square()?;
        let mut a = self.data.clone();
        let mut inv = Self::identity(n).data;
        for col in 0..n {
            let (pivot_row, pivot_abs) = (col..n)
                .map(|r| (r, a[r * n + col].norm()))
                .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot_abs < PIVOT_THRESHOLD {
                return Err(GybeError::Singular { pivot: pivot_abs });
            }
            if pivot_row != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot_row * n + j);
                    inv.swap(col * n + j, pivot_row * n + j);
                }
            }
            let p = a[col * n + col].inv();
            for j in 0..n {
                a[col * n + j] *= p;
                inv[col * n + j] *= p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[r * n + col];
                if f.re == 0.0 && f.im == 0.0 {
                    continue;
                }
                for j in 0..n {
                    let (ac, ic) = (a[col * n + j], inv[col * n + j]);
                    a[r * n + j] -= f * ac;
                    inv[r * n + j] -= f * ic;
                }
            }
        }
        Ok(Self {
            rows: n,
            cols: n,
            data: inv,
        })
    }

    /// Determinant by LU elimination with partial pivoting.
    pub fn determinant(&self) -> Result<Complex> {
        let n = self.ensure_square()?;
        let mut a = self.data.clone();
        let mut det = Complex::new(1.0, 0.0);
        for col in 0..n {
            let (pivot_row, pivot_abs) = (col..n)
                .map(|r| (r, a[r * n + col].norm()))
                .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot_abs == 0.0 {
                return Ok(Complex::new(0.0, 0.0));
            }
            if pivot_row != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot_row * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det *= p;
            for r in col + 1..n {
                let f = a[r * n + col] / p;
                for j in col..n {
                    let v = a[col * n + j];
                    a[r * n + j] -= f * v;
                }
            }
        }
        Ok(det)
    }

    /// Characteristic polynomial `det(z I - M)`, coefficients in ascending
    /// order of degree (the last one is 1).
    pub fn characteristic_polynomial(&self) -> Result<Vec<Complex>> {
        let n = self.ensure_square()?;
        if n > MAX_EIGEN_SIZE {
            return Err(GybeError::InvalidParameter(format!(
                "characteristic polynomial limited to size {MAX_EIGEN_SIZE}, got {n}"
            )));
        }
        Ok(crate::eigen::faddeev_leverrier(self))
    }

    /// All eigenvalues with multiplicity.
    pub fn eigenvalues(&self) -> Result<Vec<Complex>> {
        let poly = self.characteristic_polynomial()?;
        crate::eigen::polynomial_roots(&poly, &crate::eigen::RootConfig::default())
    }

    /// `n`-fold Kronecker power.
    pub fn kron_power(&self, n: usize) -> Self {
        let mut out = Self::identity(1);
        for _ in 0..n {
            out = out.kron(self);
        }
        out
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for ComplexMatrix {
    /// Human-readable table; entries rounded to six decimals.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols {
                let z = self[(i, j)];
                let re = if z.re.abs() < 5e-7 { 0.0 } else { z.re };
                let im = if z.im.abs() < 5e-7 { 0.0 } else { z.im };
                if j > 0 {
                    write!(f, "  ")?;
                }
                write!(f, "{re:>9.6}{im:+.6}i")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Wire form: `{"rows": n, "cols": m, "entries": [[re, im], ...]}`, row-major.
#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    entries: Vec<[f64; 2]>,
}

impl Serialize for ComplexMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson {
            rows: self.rows,
            cols: self.cols,
            entries: self.data.iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(d)?;
        let data = raw.entries.iter().map(|&[re, im]| Complex::new(re, im)).collect();
        ComplexMatrix::new(raw.rows, raw.cols, data).map_err(serde::de::Error::custom)
    }
}

/// Sort key used for eigenvalue multisets: `(re, im)` rounded to 1e-6.
pub fn multiset_key(z: &Complex) -> (i64, i64) {
    ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64)
}

/// Sorts a multiset of complex numbers by [`multiset_key`].
pub fn sort_multiset(values: &mut [Complex]) {
    values.sort_by(|a, b| {
        multiset_key(a)
            .cmp(&multiset_key(b))
            .then(a.re.total_cmp(&b.re))
            .then(a.im.total_cmp(&b.im))
    });
}

/// Distance between two multisets: each element of `a` (in sorted order) is
/// paired with the nearest unused element of `b`, and the largest pairing
/// distance is returned. Infinite when sizes differ.
pub fn multiset_distance(a: &[Complex], b: &[Complex]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut a = a.to_vec();
    sort_multiset(&mut a);
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in &a {
        let (idx, d) = b
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, y)| (i, (x - y).norm()))
            .fold(
                (usize::MAX, f64::INFINITY),
                |best, cur| if cur.1 < best.1 { cur } else { best },
            );
        used[idx] = true;
        worst = worst.max(d);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sigma_x() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()
    }

    fn sigma_z() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]).unwrap()
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(i2.kron(&i2), ComplexMatrix::identity(4));
    }

    #[test]
    fn kron_diagonal_with_identity() {
        let w = cis(0.7);
        let d = ComplexMatrix::diag(&[c(1.0, 0.0), w]);
        let expected = ComplexMatrix::diag(&[c(1.0, 0.0), c(1.0, 0.0), w, w]);
        assert_eq!(d.kron(&ComplexMatrix::identity(2)), expected);
    }

    #[test]
    fn kron_sigma_x_sigma_z_blocks() {
        // Hand expansion: [[0*Z, 1*Z], [1*Z, 0*Z]].
        let k = sigma_x().kron(&sigma_z());
        let expected = ComplexMatrix::from_real_rows(&[
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 0.0, 0.0, -1.0],
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, -1.0, 0.0, 0.0],
        ])
        .unwrap();
        assert_eq!(k, expected);
    }

    #[test]
    fn direct_sum_basic_cases() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(i2.direct_sum(&i2).unwrap(), ComplexMatrix::identity(4));
        let x = ComplexMatrix::from_fn(4, 4, |i, j| c(i as f64, j as f64));
        let s = x.direct_sum(&x).unwrap();
        assert_eq!(s.block(0, 0, 4), x);
        assert_eq!(s.block(4, 4, 4), x);
        assert_eq!(s.block(0, 4, 4), ComplexMatrix::zeros(4, 4));
    }

    #[test]
    fn direct_sum_rejects_non_square() {
        let r = ComplexMatrix::zeros(2, 3);
        assert!(matches!(
            r.direct_sum(&ComplexMatrix::identity(2)),
            Err(GybeError::NotSquare { .. })
        ));
    }

    #[test]
    fn unitarity_of_scaled_identity() {
        let m = ComplexMatrix::identity(4).scale(c(2.0, 0.0));
        let check = m.is_unitary(Tolerance::new(1e-12).unwrap()).unwrap();
        assert!(!check.unitary);
        assert!((check.residual - 3.0).abs() < 1e-15);
    }

    #[test]
    fn inverse_cases() {
        let i8 = ComplexMatrix::identity(8);
        assert_eq!(i8.inverse().unwrap(), i8);
        let d = ComplexMatrix::diag(&[c(2.0, 0.0), c(0.0, 1.0)]);
        let expected = ComplexMatrix::diag(&[c(0.5, 0.0), c(0.0, -1.0)]);
        assert!(d.inverse().unwrap().approx_eq(&expected, 1e-15));
    }

    #[test]
    fn inverse_rejects_singular() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]).unwrap();
        assert!(matches!(m.inverse(), Err(GybeError::Singular { .. })));
        let tiny = ComplexMatrix::identity(2).scale(c(1e-14, 0.0));
        assert!(tiny.inverse().is_err());
    }

    #[test]
    fn determinant_of_permutation() {
        let p = sigma_x();
        assert!((p.determinant().unwrap() - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn eigenvalues_of_identity() {
        let eig = ComplexMatrix::identity(4).eigenvalues().unwrap();
        assert_eq!(eig.len(), 4);
        for z in eig {
            assert!((z - c(1.0, 0.0)).norm() < 1e-8);
        }
    }

    #[test]
    fn eigenvalues_of_rotation() {
        let t = PI / 5.0;
        let m = ComplexMatrix::from_real_rows(&[&[t.cos(), -t.sin()], &[t.sin(), t.cos()]]).unwrap();
        let eig = m.eigenvalues().unwrap();
        assert!(multiset_distance(&eig, &[cis(t), cis(-t)]) < 1e-12);
    }

    #[test]
    fn eigenvalues_reject_large_input() {
        assert!(ComplexMatrix::identity(17).eigenvalues().is_err());
    }

    #[test]
    fn matrix_json_round_trip_is_bit_exact() {
        let m = ComplexMatrix::from_fn(3, 3, |i, j| c(0.1 * i as f64 + 1.0 / 3.0, -(j as f64).sqrt()));
        let text = serde_json::to_string(&m).unwrap();
        let back: ComplexMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn matrix_json_rejects_wrong_length() {
        let text = r#"{"rows": 2, "cols": 2, "entries": [[1, 0], [0, 0], [0, 0]]}"#;
        assert!(serde_json::from_str::<ComplexMatrix>(text).is_err());
    }

    #[test]
    fn tolerance_rejects_negative() {
        assert!(Tolerance::new(-1.0).is_err());
        assert!(Tolerance::new(f64::NAN).is_err());
        assert!(serde_json::from_str::<Tolerance>("-0.5").is_err());
    }

    #[test]
    fn multiset_distance_ignores_order() {
        let a = [c(1.0, 0.0), c(0.0, 1.0), c(0.0, 1.0)];
        let b = [c(0.0, 1.0), c(1.0, 0.0), c(0.0, 1.0)];
        assert_eq!(multiset_distance(&a, &b), 0.0);
        assert!(multiset_distance(&a, &b[..2]).is_infinite());
    }
}
