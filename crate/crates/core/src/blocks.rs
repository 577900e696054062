//! Block-structured `(2,3,1)` solutions `R = X ⊕ Y`.
//!
//! Block convention: `X` occupies rows/columns 0..4 of `R` and `Y` rows/columns
//! 4..8. Each is written `(1/√2) [[M1, M2], [M3, M4]]` with 2x2 blocks, so `A`
//! is the top-left 2x2 block of `√2·X`. For the solutions housed here every
//! block is diagonal:
//!
//! ```text
//! A = diag(1, ω)   B = diag(α, β)   C = -D B† A   D = diag(γ, δ)
//! ```
//!
//! and the blocks of `Y` are determined by `(ω, γ, δ, α, β)`. Unitarity of
//! `Y` restricts `(ω, γ, δ)` to three categories, one per family.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{GybeError, Result};
use crate::linalg::{c, cis, Complex, ComplexMatrix, Tolerance};
use crate::yang_baxter::{CheckReport, GybeSignature, RMatrix};

const UNIT_CIRCLE_TOL: f64 = 1e-12;

/// Tolerance used by [`classify_unitary_params`].
pub const CLASSIFY_TOL: f64 = 1e-9;

/// Tolerance for the "(2x2)-diagonally unitary" precondition of the reduction.
pub const STRUCTURE_TOL: f64 = 1e-9;

fn one() -> Complex {
    c(1.0, 0.0)
}

fn on_unit_circle(z: Complex) -> bool {
    z.is_finite() && (z.norm() - 1.0).abs() <= UNIT_CIRCLE_TOL
}

fn require_unit(name: &str, z: Complex) -> Result<()> {
    if on_unit_circle(z) {
        Ok(())
    } else {
        Err(GybeError::InvalidParameter(format!(
            "{name} must lie on the unit circle, got {z} (|{name}| = {})",
            z.norm()
        )))
    }
}

/// A 2x2 diagonal matrix `diag(p, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagBlock {
    pub p: Complex,
    pub q: Complex,
}

impl DiagBlock {
    pub fn new(p: Complex, q: Complex) -> Self {
        Self { p, q }
    }

    pub fn identity() -> Self {
        Self::new(one(), one())
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::diag(&[self.p, self.q])
    }

    pub fn dagger(&self) -> Self {
        Self::new(self.p.conj(), self.q.conj())
    }

    pub fn scale(&self, s: Complex) -> Self {
        Self::new(self.p * s, self.q * s)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        (self.p.norm() - 1.0).abs() <= tol && (self.q.norm() - 1.0).abs() <= tol
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.p - other.p).norm().max((self.q - other.q).norm())
    }
}

impl std::ops::Mul for DiagBlock {
    type Output = DiagBlock;
    fn mul(self, rhs: DiagBlock) -> DiagBlock {
        DiagBlock::new(self.p * rhs.p, self.q * rhs.q)
    }
}

impl std::ops::Neg for DiagBlock {
    type Output = DiagBlock;
    fn neg(self) -> DiagBlock {
        DiagBlock::new(-self.p, -self.q)
    }
}

/// One of the three families of block solutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Family {
    /// `ω = γ = i, δ = 1`.
    First,
    /// `ω = δ = i, γ = 1`.
    Second,
    /// `ω = γ = δ = 1`.
    Third,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::First, Family::Second, Family::Third];

    pub fn from_index(k: u8) -> Result<Self> {
        match k {
            1 => Ok(Family::First),
            2 => Ok(Family::Second),
            3 => Ok(Family::Third),
            _ => Err(GybeError::InvalidParameter(format!(
                "family must be 1, 2 or 3, got {k}"
            ))),
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Family::First => 1,
            Family::Second => 2,
            Family::Third => 3,
        }
    }

    /// `(ω, γ, δ)` for the family.
    pub fn unitary_params(self) -> (Complex, Complex, Complex) {
        let i = c(0.0, 1.0);
        match self {
            Family::First => (i, i, one()),
            Family::Second => (i, one(), i),
            Family::Third => (one(), one(), one()),
        }
    }

    /// Eigenvalues shared by `X` and `Y` of every member of the family.
    pub fn block_eigenvalues(self) -> [Complex; 4] {
        match self {
            Family::First => [
                cis(-PI / 12.0),
                cis(-PI / 12.0),
                cis(7.0 * PI / 12.0),
                cis(7.0 * PI / 12.0),
            ],
            Family::Second => [cis(-PI / 4.0), -cis(-PI / 4.0), cis(PI / 4.0), cis(PI / 4.0)],
            Family::Third => [cis(-PI / 4.0), cis(-PI / 4.0), cis(PI / 4.0), cis(PI / 4.0)],
        }
    }
}

impl TryFrom<u8> for Family {
    type Error = GybeError;
    fn try_from(k: u8) -> Result<Self> {
        Family::from_index(k)
    }
}

impl From<Family> for u8 {
    fn from(f: Family) -> u8 {
        f.index()
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// A member `R(θ)` of one of the families, `0 <= θ <= π`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub family: Family,
    pub theta: f64,
}

impl FamilyParams {
    /// Angles within 1e-12 outside `[0, π]` are clamped, anything further out
    /// is rejected.
    pub fn new(family: Family, theta: f64) -> Result<Self> {
        if !theta.is_finite() || !(-1e-12..=PI + 1e-12).contains(&theta) {
            return Err(GybeError::InvalidParameter(format!(
                "theta must lie in [0, pi], got {theta}"
            )));
        }
        Ok(Self {
            family,
            theta: theta.clamp(0.0, PI),
        })
    }

    pub fn general(&self) -> GeneralParams {
        GeneralParams {
            family: self.family,
            alpha: one(),
            beta: cis(self.theta),
        }
    }
}

/// A member `R(α, β)` of one of the families, `|α| = |β| = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneralParams {
    pub family: Family,
    pub alpha: Complex,
    pub beta: Complex,
}

impl GeneralParams {
    pub fn new(family: Family, alpha: Complex, beta: Complex) -> Result<Self> {
        require_unit("alpha", alpha)?;
        require_unit("beta", beta)?;
        Ok(Self { family, alpha, beta })
    }

    /// `β/α`, the local-conjugation invariant within a family.
    pub fn ratio(&self) -> Complex {
        self.beta / self.alpha
    }
}

/// `R = X ⊕ Y` through its eight 2x2 diagonal blocks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockSolution {
    pub a: DiagBlock,
    pub b: DiagBlock,
    pub c: DiagBlock,
    pub d: DiagBlock,
    pub y1: DiagBlock,
    pub y2: DiagBlock,
    pub y3: DiagBlock,
    pub y4: DiagBlock,
}

/// `(1/√2) [[m1, m2], [m3, m4]]` for diagonal 2x2 blocks.
fn assemble(blocks: [&DiagBlock; 4]) -> ComplexMatrix {
    ComplexMatrix::from_fn(4, 4, |i, j| {
        if i % 2 != j % 2 {
            return c(0.0, 0.0);
        }
        let blk = blocks[2 * (i / 2) + j / 2];
        let v = if i % 2 == 0 { blk.p } else { blk.q };
        v * FRAC_1_SQRT_2
    })
}

/// Reads the four 2x2 blocks of `√2·m` for a 4x4 `m`, requiring each to be
/// diagonal within `tol`.
fn split_diagonal(m: &ComplexMatrix, tol: f64) -> Result<[DiagBlock; 4]> {
    let mut out = [DiagBlock::identity(); 4];
    for (k, slot) in out.iter_mut().enumerate() {
        let (r0, c0) = (2 * (k / 2), 2 * (k % 2));
        if m[(r0, c0 + 1)].norm() > tol || m[(r0 + 1, c0)].norm() > tol {
            return Err(GybeError::Domain(format!("2x2 block {} is not diagonal", k + 1)));
        }
        *slot = DiagBlock::new(m[(r0, c0)] * SQRT_2, m[(r0 + 1, c0 + 1)] * SQRT_2);
    }
    Ok(out)
}

impl BlockSolution {
    pub fn x(&self) -> ComplexMatrix {
        assemble([&self.a, &self.b, &self.c, &self.d])
    }

    pub fn y(&self) -> ComplexMatrix {
        assemble([&self.y1, &self.y2, &self.y3, &self.y4])
    }

    /// The 8x8 matrix `X ⊕ Y`.
    pub fn matrix(&self) -> ComplexMatrix {
        self.x().direct_sum(&self.y()).expect("blocks are square")
    }

    pub fn to_rmatrix(&self, label: impl Into<String>) -> Result<RMatrix> {
        RMatrix::new(GybeSignature::new(2, 3, 1)?, self.matrix(), label)
    }

    /// Reads an 8x8 matrix whose off-diagonal 4x4 blocks vanish and whose
    /// 2x2 sub-blocks are diagonal, all within `tol`.
    pub fn from_matrix(m: &ComplexMatrix, tol: f64) -> Result<Self> {
        if m.rows() != 8 || m.cols() != 8 {
            return Err(GybeError::DimensionMismatch(format!(
                "block solutions are 8x8, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        if m.block(0, 4, 4).max_abs() > tol || m.block(4, 0, 4).max_abs() > tol {
            return Err(GybeError::Domain("matrix is not of the form X ⊕ Y".into()));
        }
        Self::from_blocks(&m.block(0, 0, 4), &m.block(4, 4, 4), tol)
    }

    pub fn from_blocks(x: &ComplexMatrix, y: &ComplexMatrix, tol: f64) -> Result<Self> {
        let [a, b, c, d] = split_diagonal(x, tol)?;
        let [y1, y2, y3, y4] = split_diagonal(y, tol)?;
        Ok(Self {
            a,
            b,
            c,
            d,
            y1,
            y2,
            y3,
            y4,
        })
    }

    /// `X` unitary and each of `A, B, C, D` unitary.
    pub fn is_diagonally_unitary(&self, tol: f64) -> bool {
        [self.a, self.b, self.c, self.d].iter().all(|blk| blk.is_unitary(tol))
            && self
                .x()
                .is_unitary(Tolerance::new(tol).unwrap_or_default())
                .map(|u| u.unitary)
                .unwrap_or(false)
    }

    /// Largest entry difference over all eight blocks.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        [
            self.a.max_abs_diff(&other.a),
            self.b.max_abs_diff(&other.b),
            self.c.max_abs_diff(&other.c),
            self.d.max_abs_diff(&other.d),
            self.y1.max_abs_diff(&other.y1),
            self.y2.max_abs_diff(&other.y2),
            self.y3.max_abs_diff(&other.y3),
            self.y4.max_abs_diff(&other.y4),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// The 8x8 Rowell solution built from `ζ = e^{2πi/8}`, signature `(2,3,1)`.
pub fn rowell_solution() -> RMatrix {
    let z = cis(PI / 4.0);
    let zi = z.conj();
    let zero = c(0.0, 0.0);
    let s = c(FRAC_1_SQRT_2, 0.0);
    let x = ComplexMatrix::from_rows(&[
        vec![zi, zero, -zi, zero],
        vec![zero, z, zero, z],
        vec![z, zero, z, zero],
        vec![zero, -zi, zero, zi],
    ])
    .expect("4x4");
    let y = ComplexMatrix::from_rows(&[
        vec![z, zero, z, zero],
        vec![zero, zi, zero, -zi],
        vec![-zi, zero, zi, zero],
        vec![zero, z, zero, z],
    ])
    .expect("4x4");
    let m = x.direct_sum(&y).expect("square").scale(s);
    RMatrix::new(GybeSignature { d: 2, m: 3, l: 1 }, m, "rowell").expect("Rowell solution is invertible")
}

/// The 8x8 X-shaped solution of signature `(2,3,2)`: `1/√2` on the diagonal,
/// `±1/√2` on the antidiagonal (positive in the upper half).
pub fn xshape_solution() -> RMatrix {
    let m = ComplexMatrix::from_fn(8, 8, |i, j| {
        if i == j {
            c(FRAC_1_SQRT_2, 0.0)
        } else if i + j == 7 {
            c(if i < 4 { FRAC_1_SQRT_2 } else { -FRAC_1_SQRT_2 }, 0.0)
        } else {
            c(0.0, 0.0)
        }
    });
    RMatrix::new(GybeSignature { d: 2, m: 3, l: 2 }, m, "xshape").expect("X-shape solution is invertible")
}

/// `C = -D B† A`, which makes `X` unitary when `A, B, D` are unitary diagonal.
pub fn derive_c(a: &DiagBlock, b: &DiagBlock, d: &DiagBlock) -> Result<DiagBlock> {
    for (name, blk) in [("A", a), ("B", b)] {
        if !blk.is_unitary(UNIT_CIRCLE_TOL) {
            return Err(GybeError::InvalidParameter(format!("{name} must be unitary")));
        }
    }
    Ok(-(*d * b.dagger() * *a))
}

/// The blocks `Y1..Y4` forced by the first block equation:
///
/// ```text
/// Y1 = diag(ω, ω γ̄ (1 + δω - ω))
/// Y2 = diag(β δ̄ (1 - γ - ω̄), -ᾱ β²)
/// Y3 = diag(β̄ (1 + ωγ - ω), α β̄² δ² ω² γ̄)
/// Y4 = diag(δ̄ γ (ω + ω̄ - γ), 1 - δ + ω)
/// ```
pub fn derive_y(
    omega: Complex,
    gamma: Complex,
    delta: Complex,
    alpha: Complex,
    beta: Complex,
) -> Result<[DiagBlock; 4]> {
    for (name, z) in [
        ("omega", omega),
        ("gamma", gamma),
        ("delta", delta),
        ("alpha", alpha),
        ("beta", beta),
    ] {
        require_unit(name, z)?;
    }
    let (w, g, d, a, b) = (omega, gamma, delta, alpha, beta);
    let y1 = DiagBlock::new(w, w * g.conj() * (one() + d * w - w));
    let y2 = DiagBlock::new(b * d.conj() * (one() - g - w.conj()), -a.conj() * b * b);
    let y3 = DiagBlock::new(
        b.conj() * (one() + w * g - w),
        a * b.conj() * b.conj() * d * d * w * w * g.conj(),
    );
    let y4 = DiagBlock::new(d.conj() * g * (w + w.conj() - g), one() - d + w);
    Ok([y1, y2, y3, y4])
}

/// Assembles the block solution with parameters `(ω, γ, δ)` of `family` and
/// `B = diag(α, β)`.
pub fn block_solution(family: Family, alpha: Complex, beta: Complex) -> Result<BlockSolution> {
    let (w, g, d) = family.unitary_params();
    let a = DiagBlock::new(one(), w);
    let b = DiagBlock::new(alpha, beta);
    let dd = DiagBlock::new(g, d);
    let cc = derive_c(&a, &b, &dd)?;
    let [y1, y2, y3, y4] = derive_y(w, g, d, alpha, beta)?;
    Ok(BlockSolution {
        a,
        b,
        c: cc,
        d: dd,
        y1,
        y2,
        y3,
        y4,
    })
}

/// One of the three base solutions (`α = β = 1`).
pub fn base_solution(family: Family) -> BlockSolution {
    block_solution(family, one(), one()).expect("unit parameters")
}

/// `R(α, β)` of the given family.
pub fn general_solution(p: &GeneralParams) -> Result<RMatrix> {
    GeneralParams::new(p.family, p.alpha, p.beta)?;
    let label = format!(
        "family{}:alpha={},{}:beta={},{}",
        p.family, p.alpha.re, p.alpha.im, p.beta.re, p.beta.im
    );
    block_solution(p.family, p.alpha, p.beta)?.to_rmatrix(label)
}

/// `R(θ) = R(1, e^{iθ})`.
pub fn family_solution(p: &FamilyParams) -> Result<RMatrix> {
    let p = FamilyParams::new(p.family, p.theta)?;
    Ok(general_solution(&p.general())?.with_label(format!("family{}:theta={}", p.family, p.theta)))
}

fn split_general(m: &ComplexMatrix) -> [[ComplexMatrix; 2]; 2] {
    let blk = |r, c| m.block(r, c, 2).scale(Complex::new(SQRT_2, 0.0));
    [[blk(0, 0), blk(0, 2)], [blk(2, 0), blk(2, 2)]]
}

/// The eight block equations of `R = X ⊕ Y`. For blocks `M` of `√2·X` (first
/// four) or of `√2·Y` (last four) and `(i, j)` in row-major order:
///
/// ```text
/// (M_i0 ⊗ I) X (M_0j ⊗ I) + (M_i1 ⊗ I) Y (M_1j ⊗ I) = √2 · R_i (M_ij ⊗ I) R_j
/// ```
///
/// with `R_0 = X`, `R_1 = Y`. Each residual is halved so that it is exactly
/// the matching 4x4 block of `L S L - S L S`; the overall residual therefore
/// equals that of the `(2,3,1)` check on `X ⊕ Y`. Blocks need not be diagonal.
pub fn check_block_equations(x: &ComplexMatrix, y: &ComplexMatrix, tol: Tolerance) -> Result<CheckReport> {
    for m in [x, y] {
        if m.rows() != 4 || m.cols() != 4 {
            return Err(GybeError::DimensionMismatch("block equations need 4x4 X and Y".into()));
        }
    }
    let i2 = ComplexMatrix::identity(2);
    let sqrt2 = Complex::new(SQRT_2, 0.0);
    let halves = [x, y];
    let mut detail = Vec::with_capacity(8);
    for source in [x, y] {
        let mb = split_general(source);
        let lift = |m: &ComplexMatrix| m.kron(&i2);
        for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let lhs = &lift(&mb[i][0]).matmul(x).matmul(&lift(&mb[0][j]))
                + &lift(&mb[i][1]).matmul(y).matmul(&lift(&mb[1][j]));
            let rhs = halves[i].matmul(&lift(&mb[i][j])).matmul(halves[j]).scale(sqrt2);
            detail.push(lhs.max_abs_diff(&rhs) / 2.0);
        }
    }
    Ok(CheckReport::from_detail(detail, tol))
}

/// Residuals of the ten scalar conditions on `(ω, γ, δ)`: four consistency
/// equations from the second block equation, then six for unitarity of `Y`.
pub fn param_constraint_residuals(omega: Complex, gamma: Complex, delta: Complex) -> [f64; 10] {
    let (w, g, d) = (omega, gamma, delta);
    let (wb, gb, db) = (w.conj(), g.conj(), d.conj());
    let two = c(2.0, 0.0);
    let eqs: [(Complex, Complex); 10] = [
        (
            (d - one()) * w * w + (one() + d * d - d * g + g) * w - two * g,
            c(0.0, 0.0),
        ),
        (d * (two - wb - g), -wb - g + one() + wb * g - g * g + w * g),
        ((d - one()) * g, d * d - one() + w * (one() - d)),
        (d * (two * w + wb - g), wb - one() + g + wb * g + w * g - g * g),
        (w + wb + g + gb, w * g + wb * gb + two),
        (w + wb + d + db, w * d + wb * db + two),
        (one() + w + wb + w * g, g + gb + w * w + w * gb),
        (two + w * d, d + db + w * db),
        (w + wb + g + gb + w * gb + wb * g, c(4.0, 0.0) + w * w + wb * wb),
        (d + db + wb * d + w * db, two + w + wb),
    ];
    eqs.map(|(lhs, rhs)| (lhs - rhs).norm())
}

/// The ten scalar conditions as a report.
pub fn check_param_constraints(omega: Complex, gamma: Complex, delta: Complex, tol: Tolerance) -> CheckReport {
    CheckReport::from_detail(param_constraint_residuals(omega, gamma, delta).to_vec(), tol)
}

/// Admissible `(ω, γ, δ)` for a unitary `Y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ParamCategory {
    /// `ω = γ = ±i`, `δ = 1`.
    A,
    /// `ω = δ = ±i`, `γ = 1`.
    B,
    /// `ω = γ = δ = 1`.
    C,
    None,
}

impl fmt::Display for ParamCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ParamCategory::A => "A",
            ParamCategory::B => "B",
            ParamCategory::C => "C",
            ParamCategory::None => "none",
        };
        f.write_str(s)
    }
}

/// Matches `(ω, γ, δ)` against the three admissible categories at 1e-9.
pub fn classify_unitary_params(omega: Complex, gamma: Complex, delta: Complex) -> ParamCategory {
    let t = CLASSIFY_TOL;
    let near = |a: Complex, b: Complex| (a - b).norm() <= t;
    let i = c(0.0, 1.0);
    let is_pm_i = near(omega, i) || near(omega, -i);
    if is_pm_i && near(omega, gamma) && near(delta, one()) {
        ParamCategory::A
    } else if is_pm_i && near(omega, delta) && near(gamma, one()) {
        ParamCategory::B
    } else if near(omega, one()) && near(gamma, one()) && near(delta, one()) {
        ParamCategory::C
    } else {
        ParamCategory::None
    }
}

/// A solution conjugated to `B = I`, with the removed `α, β`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Reduction {
    pub reduced: BlockSolution,
    pub alpha: Complex,
    pub beta: Complex,
}

/// Conjugates `X` by `diag(I, B)` and `Y` by `diag(I, ᾱβ B)`:
///
/// ```text
/// Ã = A, B̃ = I, C̃ = B C (= -D A), D̃ = D,
/// Ỹ1 = Y1, Ỹ2 = αβ̄ B† Y2, Ỹ3 = ᾱβ B Y3, Ỹ4 = Y4.
/// ```
pub fn reduce_to_b_identity(s: &BlockSolution) -> Result<Reduction> {
    if !s.is_diagonally_unitary(STRUCTURE_TOL) {
        return Err(GybeError::Domain("X is not (2x2)-diagonally unitary".into()));
    }
    let (alpha, beta) = (s.b.p, s.b.q);
    let reduced = BlockSolution {
        a: s.a,
        b: DiagBlock::identity(),
        c: s.b * s.c,
        d: s.d,
        y1: s.y1,
        y2: (s.b.dagger() * s.y2).scale(alpha * beta.conj()),
        y3: (s.b * s.y3).scale(alpha.conj() * beta),
        y4: s.y4,
    };
    Ok(Reduction { reduced, alpha, beta })
}

/// Inverse of [`reduce_to_b_identity`] for an arbitrary unitary diagonal `b`.
pub fn restore(reduced: &BlockSolution, b: &DiagBlock) -> Result<BlockSolution> {
    if !b.is_unitary(UNIT_CIRCLE_TOL) {
        return Err(GybeError::InvalidParameter("B must be unitary".into()));
    }
    let (alpha, beta) = (b.p, b.q);
    Ok(BlockSolution {
        a: reduced.a,
        b: reduced.b * *b,
        c: b.dagger() * reduced.c,
        d: reduced.d,
        y1: reduced.y1,
        y2: (reduced.y2 * *b).scale(alpha.conj() * beta),
        y3: (b.dagger() * reduced.y3).scale(alpha * beta.conj()),
        y4: reduced.y4,
    })
}
