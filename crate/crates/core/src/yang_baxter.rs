//! The generalized Yang-Baxter equation and the checks built on it.
//!
//! For a `(d, m, l)` signature and an invertible `d^m x d^m` matrix `R`, set
//! `L = R ⊗ I^{⊗l}` and `S = I^{⊗l} ⊗ R`, both of size `d^{m+l}`. `R` is a
//! solution when `L S L = S L S`; the residual reported everywhere is the
//! max-abs entry of `L S L - S L S`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{GybeError, Result};
use crate::linalg::{Complex, ComplexMatrix, Tolerance, MAX_DIMENSION};

/// The triple `(d, m, l)` indexing a generalized Yang-Baxter equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GybeSignature {
    /// Local dimension.
    pub d: usize,
    /// Number of tensor factors `R` acts on.
    pub m: usize,
    /// Shift between consecutive copies of `R`.
    pub l: usize,
}

impl GybeSignature {
    pub fn new(d: usize, m: usize, l: usize) -> Result<Self> {
        if d == 0 || m == 0 || l == 0 {
            return Err(GybeError::InvalidParameter(format!(
                "signature entries must be positive, got ({d},{m},{l})"
            )));
        }
        Ok(Self { d, m, l })
    }

    /// The ordinary Yang-Baxter equation in dimension `d`.
    pub fn ybe(d: usize) -> Self {
        Self { d, m: 2, l: 1 }
    }

    /// Side length `d^m` of a conforming R-matrix.
    pub fn matrix_size(&self) -> usize {
        self.d.pow(self.m as u32)
    }

    /// Side length of the space `R` lifts to in the braid group on `n` strands.
    pub fn lifted_size(&self, n: usize) -> usize {
        self.d.pow((self.m + (n - 2) * self.l) as u32)
    }

    /// True when non-adjacent lifted generators act on disjoint tensor
    /// factors, so far commutativity holds automatically.
    pub fn far_commutativity_is_vacuous(&self) -> bool {
        2 * self.l >= self.m
    }
}

impl fmt::Display for GybeSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.d, self.m, self.l)
    }
}

impl std::str::FromStr for GybeSignature {
    type Err = GybeError;
    /// Parses `"d,m,l"`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().trim_matches(|c| c == '(' || c == ')').split(',').collect();
        if parts.len() != 3 {
            return Err(GybeError::Parse(format!("signature must be d,m,l, got {s:?}")));
        }
        let mut v = [0usize; 3];
        for (slot, p) in v.iter_mut().zip(&parts) {
            *slot = p
                .trim()
                .parse()
                .map_err(|_| GybeError::Parse(format!("bad signature component {p:?}")))?;
        }
        Self::new(v[0], v[1], v[2])
    }
}

/// An invertible matrix tagged with the equation it is meant to solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RMatrix {
    pub signature: GybeSignature,
    pub matrix: ComplexMatrix,
    pub label: String,
}

impl RMatrix {
    /// Validates size `d^m` and invertibility.
    pub fn new(signature: GybeSignature, matrix: ComplexMatrix, label: impl Into<String>) -> Result<Self> {
        let n = matrix.ensure_square()?;
        if n != signature.matrix_size() {
            return Err(GybeError::DimensionMismatch(format!(
                "signature {signature} needs a {s}x{s} matrix, got {n}x{n}",
                s = signature.matrix_size()
            )));
        }
        matrix.inverse()?;
        Ok(Self {
            signature,
            matrix,
            label: label.into(),
        })
    }

    pub fn size(&self) -> usize {
        self.matrix.rows()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Entrywise complex conjugate; a solution again since the equation has
    /// real coefficients.
    pub fn conjugate(&self) -> Self {
        Self {
            signature: self.signature,
            matrix: self.matrix.conj(),
            label: format!("conj({})", self.label),
        }
    }
}

/// Outcome of a residual-based check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub passed: bool,
    pub residual: f64,
    pub tolerance: Tolerance,
    /// Per-equation residuals; `residual` is their maximum.
    pub detail: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vacuous: Option<bool>,
}

impl CheckReport {
    pub fn from_detail(detail: Vec<f64>, tolerance: Tolerance) -> Self {
        let residual = detail.iter().copied().fold(0.0, f64::max);
        // NaN residuals never pass.
        let passed = detail.iter().all(|r| !r.is_nan()) && tolerance.accepts(residual);
        Self {
            passed,
            residual,
            tolerance,
            detail,
            vacuous: None,
        }
    }

    fn vacuous(tolerance: Tolerance) -> Self {
        Self {
            passed: true,
            residual: 0.0,
            tolerance,
            detail: Vec::new(),
            vacuous: Some(true),
        }
    }
}

/// `L S L - S L S` for `L = R ⊗ I_{d^l}`, `S = I_{d^l} ⊗ R`.
pub fn gybe_difference(matrix: &ComplexMatrix, sig: GybeSignature) -> Result<ComplexMatrix> {
    let n = matrix.ensure_square()?;
    if n != sig.matrix_size() {
        return Err(GybeError::DimensionMismatch(format!(
            "signature {sig} needs size {}, got {n}",
            sig.matrix_size()
        )));
    }
    let shift = sig.d.pow(sig.l as u32);
    let left = matrix.pad_identity(1, shift);
    let right = matrix.pad_identity(shift, 1);
    let ls = left.matmul(&right);
    let lhs = ls.matmul(&left);
    let sl = right.matmul(&left);
    let rhs = sl.matmul(&right);
    Ok(&lhs - &rhs)
}

/// Residual of the `(d, m, l)` equation for an arbitrary square matrix.
pub fn gybe_residual(matrix: &ComplexMatrix, sig: GybeSignature) -> Result<f64> {
    Ok(gybe_difference(matrix, sig)?.max_abs())
}

/// Checks the generalized Yang-Baxter equation for `r` under its own signature.
pub fn check_gybe(r: &RMatrix, tol: Tolerance) -> Result<CheckReport> {
    check_gybe_matrix(&r.matrix, r.signature, tol)
}

/// As [`check_gybe`] without the invertibility bookkeeping of [`RMatrix`].
pub fn check_gybe_matrix(matrix: &ComplexMatrix, sig: GybeSignature, tol: Tolerance) -> Result<CheckReport> {
    let residual = gybe_residual(matrix, sig)?;
    Ok(CheckReport::from_detail(vec![residual], tol))
}

/// Local dimension `d` with `d^2 = n`, if any.
fn square_root_dim(n: usize) -> Option<usize> {
    let d = (n as f64).sqrt().round() as usize;
    (d * d == n).then_some(d)
}

/// The ordinary Yang-Baxter equation for a `d^2 x d^2` matrix.
pub fn check_ybe(x: &ComplexMatrix, tol: Tolerance) -> Result<CheckReport> {
    let n = x.ensure_square()?;
    let d =
        square_root_dim(n).ok_or_else(|| GybeError::DimensionMismatch(format!("size {n} is not a perfect square")))?;
    check_gybe_matrix(x, GybeSignature::ybe(d), tol)
}

/// The YBE check of `x` next to the `(2,3,1)` check of `x ⊕ x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoubleLiftReport {
    pub ybe: CheckReport,
    pub doubled: CheckReport,
}

impl DoubleLiftReport {
    pub fn agree(&self) -> bool {
        self.ybe.passed == self.doubled.passed
    }
}

/// For a 4x4 `x`, checks both the YBE for `x` and the `(2,3,1)` equation for
/// `x ⊕ x`; the two verdicts coincide for exact arithmetic.
pub fn double_lift_check(x: &ComplexMatrix, tol: Tolerance) -> Result<DoubleLiftReport> {
    if x.rows() != 4 || x.cols() != 4 {
        return Err(GybeError::DimensionMismatch(format!(
            "double lift expects a 4x4 matrix, got {}x{}",
            x.rows(),
            x.cols()
        )));
    }
    let ybe = check_ybe(x, tol)?;
    let doubled = check_gybe_matrix(&x.direct_sum(x)?, GybeSignature::new(2, 3, 1)?, tol)?;
    Ok(DoubleLiftReport { ybe, doubled })
}

/// `I^{⊗l(i-1)} ⊗ R ⊗ I^{⊗l(n-i-1)}`, the image of the `i`-th generator of the
/// braid group on `n` strands (1-based `i`).
pub fn braid_generator_matrix(r: &RMatrix, n: usize, i: usize) -> Result<ComplexMatrix> {
    generator_for(&r.matrix, r.signature, n, i)
}

pub(crate) fn generator_for(matrix: &ComplexMatrix, sig: GybeSignature, n: usize, i: usize) -> Result<ComplexMatrix> {
    if n < 2 || i == 0 || i > n - 1 {
        return Err(GybeError::IndexOutOfRange { index: i as i64, n });
    }
    let total = sig.lifted_size(n);
    if total > MAX_DIMENSION {
        return Err(GybeError::InvalidParameter(format!(
            "lifted dimension {total} exceeds {MAX_DIMENSION}"
        )));
    }
    let left = sig.d.pow((sig.l * (i - 1)) as u32);
    let right = sig.d.pow((sig.l * (n - i - 1)) as u32);
    Ok(matrix.pad_identity(left, right))
}

/// Far commutativity: `R_{σ1} R_{σj} = R_{σj} R_{σ1}` in `B_{(j-1)l+2}` for
/// every `j > 2` with `(j-1) l < m`. Vacuous (and reported as such) when no
/// such `j` exists, i.e. when `2l >= m`.
pub fn check_far_commutativity(r: &RMatrix, tol: Tolerance) -> Result<CheckReport> {
    let sig = r.signature;
    if sig.far_commutativity_is_vacuous() {
        return Ok(CheckReport::vacuous(tol));
    }
    let mut detail = Vec::new();
    let mut j = 3;
    while (j - 1) * sig.l < sig.m {
        let n = (j - 1) * sig.l + 2;
        let first = generator_for(&r.matrix, sig, n, 1)?;
        let other = generator_for(&r.matrix, sig, n, j)?;
        let residual = first.matmul(&other).max_abs_diff(&other.matmul(&first));
        detail.push(residual);
        j += 1;
    }
    let mut report = CheckReport::from_detail(detail, tol);
    report.vacuous = Some(false);
    Ok(report)
}

/// Residual of the YBE written entrywise:
/// `sum_{a,b,c} R^{ab}_{uv} R^{cz}_{bw} R^{xy}_{ac} = sum_{m,n,p} R^{np}_{vw} R^{xm}_{un} R^{yz}_{mp}`
/// with `R^{kl}_{ij}` stored at row `k d + l`, column `i d + j`. Independent
/// of the Kronecker construction and used to cross-check it.
pub fn ybe_summation_residual(x: &ComplexMatrix) -> Result<f64> {
    let n = x.ensure_square()?;
    let d =
        square_root_dim(n).ok_or_else(|| GybeError::DimensionMismatch(format!("size {n} is not a perfect square")))?;
    let r = |k: usize, l: usize, i: usize, j: usize| x[(k * d + l, i * d + j)];
    let mut worst: f64 = 0.0;
    for xx in 0..d {
        for y in 0..d {
            for z in 0..d {
                for u in 0..d {
                    for v in 0..d {
                        for w in 0..d {
                            let mut lhs = Complex::new(0.0, 0.0);
                            let mut rhs = Complex::new(0.0, 0.0);
                            for a in 0..d {
                                for b in 0..d {
                                    for cc in 0..d {
                                        lhs += r(a, b, u, v) * r(cc, z, b, w) * r(xx, y, a, cc);
                                        rhs += r(a, b, v, w) * r(xx, cc, u, a) * r(y, z, cc, b);
                                    }
                                }
                            }
                            worst = worst.max((lhs - rhs).norm());
                        }
                    }
                }
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    fn sig231() -> GybeSignature {
        GybeSignature::new(2, 3, 1).unwrap()
    }

    #[test]
    fn identity_has_zero_residual() {
        for sig in [sig231(), GybeSignature::new(2, 3, 2).unwrap(), GybeSignature::ybe(3)] {
            let r = RMatrix::new(sig, ComplexMatrix::identity(sig.matrix_size()), "id").unwrap();
            let rep = check_gybe(&r, Tolerance::EXACT).unwrap();
            assert!(rep.passed);
            assert_eq!(rep.residual, 0.0);
        }
    }

    #[test]
    fn rmatrix_rejects_wrong_size_and_singular() {
        assert!(RMatrix::new(sig231(), ComplexMatrix::identity(4), "x").is_err());
        assert!(matches!(
            RMatrix::new(sig231(), ComplexMatrix::zeros(8, 8), "z"),
            Err(GybeError::Singular { .. })
        ));
    }

    #[test]
    fn ybe_rejects_non_square_sizes() {
        assert!(check_ybe(&ComplexMatrix::identity(8), Tolerance::EXACT).is_err());
        assert!(check_ybe(&ComplexMatrix::identity(4), Tolerance::EXACT).unwrap().passed);
    }

    #[test]
    fn generator_shapes() {
        let r = RMatrix::new(sig231(), ComplexMatrix::identity(8), "id").unwrap();
        assert_eq!(braid_generator_matrix(&r, 2, 1).unwrap(), r.matrix);
        assert_eq!(braid_generator_matrix(&r, 3, 2).unwrap().rows(), 16);
        assert!(matches!(
            braid_generator_matrix(&r, 3, 3),
            Err(GybeError::IndexOutOfRange { .. })
        ));
        assert!(braid_generator_matrix(&r, 3, 0).is_err());
        assert!(braid_generator_matrix(&r, 1, 1).is_err());
    }

    #[test]
    fn far_commutativity_vacuity_matches_signature() {
        for (m, l) in [(2, 1), (3, 1), (3, 2), (4, 1), (4, 2)] {
            let sig = GybeSignature::new(2, m, l).unwrap();
            let r = RMatrix::new(sig, ComplexMatrix::identity(sig.matrix_size()), "id").unwrap();
            let rep = check_far_commutativity(&r, Tolerance::EXACT).unwrap();
            assert_eq!(rep.vacuous, Some(2 * l >= m), "m={m} l={l}");
            assert!(rep.passed);
        }
        // (2,5,2) needs B_6, far beyond the dimension cap.
        let sig = GybeSignature::new(2, 5, 2).unwrap();
        let r = RMatrix::new(sig, ComplexMatrix::identity(32), "id").unwrap();
        assert!(check_far_commutativity(&r, Tolerance::EXACT).is_err());
    }

    #[test]
    fn signature_parsing() {
        assert_eq!("2,3,1".parse::<GybeSignature>().unwrap(), sig231());
        assert_eq!("(2, 3, 2)".parse::<GybeSignature>().unwrap().l, 2);
        assert!("2,3".parse::<GybeSignature>().is_err());
        assert!("2,0,1".parse::<GybeSignature>().is_err());
    }

    #[test]
    fn report_json_shape() {
        let rep = CheckReport::from_detail(vec![1e-15, 2e-15], Tolerance::EXACT);
        let v: serde_json::Value = serde_json::to_value(&rep).unwrap();
        assert_eq!(v["passed"], true);
        assert_eq!(v["tolerance"], 1e-12);
        assert!(v.get("vacuous").is_none());
        assert_eq!(v["detail"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn summation_form_flags_a_non_solution() {
        let x = ComplexMatrix::from_fn(4, 4, |i, j| c((i + 2 * j) as f64, 0.0));
        assert!(ybe_summation_residual(&x).unwrap() > 1.0);
        assert_eq!(ybe_summation_residual(&ComplexMatrix::identity(4)).unwrap(), 0.0);
    }
}
