//! Gauge equivalence of R-matrices.
//!
//! The gauge group is generated by three moves that map solutions to
//! solutions: multiplication by a nonzero scalar, inversion, and local
//! conjugation `R -> (Q^{-1})^{⊗m} R Q^{⊗m}` by an invertible `d x d` matrix
//! `Q`. Equivalence is established by exhibiting a witness (a sequence of
//! moves) and refuted through conjugacy invariants. The witness search only
//! covers the conjugator shapes it is asked for, so "no witness" is not a
//! proof of inequivalence.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::blocks::GeneralParams;
use crate::error::{GybeError, Result};
use crate::linalg::{multiset_distance, sort_multiset, Complex, ComplexMatrix};
use crate::lsq::{self, LmConfig};
use crate::yang_baxter::RMatrix;

/// Witnesses are accepted when they reproduce the target to this accuracy.
pub const WITNESS_TOL: f64 = 1e-9;

/// Tolerance for comparing conjugacy invariants.
pub const INVARIANT_TOL: f64 = 1e-8;

/// Tolerance on `β/α` when comparing parameters.
pub const RATIO_TOL: f64 = 1e-9;

/// One generator of the gauge group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GaugeOp {
    Scalar {
        lambda: Complex,
    },
    Inverse,
    LocalConj {
        #[serde(rename = "Q")]
        q: ComplexMatrix,
    },
}

/// Applies one gauge move. The output solves the same equation as the input
/// (for local conjugation up to rounding amplified by `cond(Q)^{2m}`).
pub fn apply_gauge(r: &RMatrix, op: &GaugeOp) -> Result<RMatrix> {
    let matrix = match op {
        GaugeOp::Scalar { lambda } => {
            if lambda.norm() == 0.0 || !lambda.is_finite() {
                return Err(GybeError::InvalidParameter("scalar must be nonzero".into()));
            }
            r.matrix.scale(*lambda)
        }
        GaugeOp::Inverse => r.matrix.inverse()?,
        GaugeOp::LocalConj { q } => local_conjugate(&r.matrix, q, r.signature.d, r.signature.m)?,
    };
    Ok(RMatrix {
        signature: r.signature,
        matrix,
        label: r.label.clone(),
    })
}

/// Applies a sequence of moves left to right.
pub fn apply_all(r: &RMatrix, ops: &[GaugeOp]) -> Result<RMatrix> {
    ops.iter().try_fold(r.clone(), |acc, op| apply_gauge(&acc, op))
}

/// `(Q^{-1})^{⊗m} · m · Q^{⊗m}`.
pub fn local_conjugate(matrix: &ComplexMatrix, q: &ComplexMatrix, d: usize, m: usize) -> Result<ComplexMatrix> {
    if q.rows() != d || q.cols() != d {
        return Err(GybeError::DimensionMismatch(format!(
            "local conjugator must be {d}x{d}, got {}x{}",
            q.rows(),
            q.cols()
        )));
    }
    let q_inv = q.inverse()?;
    Ok(q_inv.kron_power(m).matmul(matrix).matmul(&q.kron_power(m)))
}

/// A sequence of gauge moves taking `source` to `target`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceWitness {
    pub ops: Vec<GaugeOp>,
    pub residual: f64,
    pub source: String,
    pub target: String,
}

/// Similarity invariants: the sorted eigenvalue multiset and the
/// characteristic polynomial (ascending coefficients).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjugacyInvariants {
    pub eigenvalues: Vec<Complex>,
    pub char_poly: Vec<Complex>,
}

impl ConjugacyInvariants {
    /// Largest discrepancy across eigenvalue pairing and coefficients.
    pub fn distance(&self, other: &Self) -> f64 {
        if self.char_poly.len() != other.char_poly.len() {
            return f64::INFINITY;
        }
        let coeff = self
            .char_poly
            .iter()
            .zip(&other.char_poly)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        multiset_distance(&self.eigenvalues, &other.eigenvalues).max(coeff)
    }

    pub fn matches(&self, other: &Self) -> bool {
        self.distance(other) <= INVARIANT_TOL
    }
}

pub fn conjugacy_invariants(m: &ComplexMatrix) -> Result<ConjugacyInvariants> {
    let char_poly = m.characteristic_polynomial()?;
    let mut eigenvalues = crate::eigen::polynomial_roots(&char_poly, &Default::default())?;
    sort_multiset(&mut eigenvalues);
    Ok(ConjugacyInvariants { eigenvalues, char_poly })
}

/// Two members of the same family are locally conjugate exactly when their
/// ratios `β/α` agree.
pub fn is_locally_conjugate_params(p: &GeneralParams, q: &GeneralParams) -> Result<bool> {
    if p.family != q.family {
        return Err(GybeError::Domain(format!(
            "cannot compare family {} with family {}",
            p.family, q.family
        )));
    }
    Ok((p.ratio() - q.ratio()).norm() <= RATIO_TOL)
}

/// Admissible shapes for the local conjugator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConjugatorShape {
    Diagonal,
    Antidiagonal,
    /// All entries free. Heuristic: restarts may miss existing witnesses.
    General,
}

impl ConjugatorShape {
    pub const ALL: [ConjugatorShape; 3] = [
        ConjugatorShape::Diagonal,
        ConjugatorShape::Antidiagonal,
        ConjugatorShape::General,
    ];
}

impl std::str::FromStr for ConjugatorShape {
    type Err = GybeError;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "diagonal" => Ok(ConjugatorShape::Diagonal),
            "antidiagonal" => Ok(ConjugatorShape::Antidiagonal),
            "general" => Ok(ConjugatorShape::General),
            other => Err(GybeError::Parse(format!("unknown conjugator shape {other:?}"))),
        }
    }
}

/// Restart budget of the witness search.
#[derive(Debug, Clone)]
pub struct ConjugationSearch {
    pub restarts: usize,
    pub seed: u64,
    pub max_iterations: usize,
}

impl Default for ConjugationSearch {
    fn default() -> Self {
        Self {
            restarts: 8,
            seed: 17,
            max_iterations: 100,
        }
    }
}

/// A conjugator `Q` with `apply_gauge(s, LocalConj(Q)) ≈ r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalConjugation {
    pub q: ComplexMatrix,
    pub residual: f64,
    pub shape: ConjugatorShape,
}

/// Fixed entries (`Some`) and free slots (`None`) of a `d x d` conjugator,
/// row-major. One entry is pinned to 1 since conjugation ignores the scale
/// of `Q`.
fn layouts(shape: ConjugatorShape, d: usize) -> Vec<Vec<Option<Complex>>> {
    let zero = Some(Complex::new(0.0, 0.0));
    let pin = Some(Complex::new(1.0, 0.0));
    match shape {
        ConjugatorShape::Diagonal => {
            let mut l = vec![zero; d * d];
            l[0] = pin;
            for i in 1..d {
                l[i * d + i] = None;
            }
            vec![l]
        }
        ConjugatorShape::Antidiagonal => {
            let mut l = vec![zero; d * d];
            l[d - 1] = pin;
            for i in 1..d {
                l[i * d + (d - 1 - i)] = None;
            }
            vec![l]
        }
        ConjugatorShape::General => {
            let mut first = vec![None; d * d];
            first[0] = pin;
            let mut second = vec![None; d * d];
            second[0] = zero;
            if d > 1 {
                second[1] = pin;
            }
            vec![first, second]
        }
    }
}

fn build_q(layout: &[Option<Complex>], x: &[f64], d: usize) -> ComplexMatrix {
    let mut k = 0;
    let data = layout
        .iter()
        .map(|slot| match slot {
            Some(v) => *v,
            None => {
                let z = Complex::new(x[2 * k], x[2 * k + 1]);
                k += 1;
                z
            }
        })
        .collect();
    ComplexMatrix::new(d, d, data).expect("d x d")
}

/// Searches for `Q` of the allowed shapes with
/// `(Q^{-1})^{⊗m} · s · Q^{⊗m} = r`, by damped least squares on the
/// polynomial system `Q^{⊗m} r - s Q^{⊗m} = 0`. Returns the best witness
/// whose true residual is within [`WITNESS_TOL`], or `None`.
pub fn search_local_conjugation(
    r: &RMatrix,
    s: &RMatrix,
    shapes: &[ConjugatorShape],
    cfg: &ConjugationSearch,
) -> Result<Option<LocalConjugation>> {
    if r.signature != s.signature {
        return Err(GybeError::DimensionMismatch(format!(
            "signatures differ: {} vs {}",
            r.signature, s.signature
        )));
    }
    let (d, m) = (r.signature.d, r.signature.m);
    let lm = LmConfig {
        max_iterations: cfg.max_iterations,
        target_cost: 1e-28,
        ..Default::default()
    };

    for (shape_index, &shape) in shapes.iter().enumerate() {
        let mut best: Option<LocalConjugation> = None;
        for (layout_index, layout) in layouts(shape, d).iter().enumerate() {
            let free = layout.iter().filter(|e| e.is_none()).count();
            let objective = |x: &[f64], out: &mut Vec<f64>| {
                let qm = build_q(layout, x, d).kron_power(m);
                let diff = &qm.matmul(&r.matrix) - &s.matrix.matmul(&qm);
                for z in diff.entries() {
                    out.push(z.re);
                    out.push(z.im);
                }
            };
            for restart in 0..cfg.restarts.max(1) {
                let x0: Vec<f64> = if restart == 0 {
                    // Ones in every free slot: the identity (or exchange) matrix.
                    layout
                        .iter()
                        .filter(|e| e.is_none())
                        .enumerate()
                        .flat_map(|(k, _)| {
                            let diag_like =
                                shape != ConjugatorShape::General || layout_index == 0 && (k + 1) % (d + 1) == 0;
                            [if diag_like { 1.0 } else { 0.0 }, 0.0]
                        })
                        .collect()
                } else {
                    let stream =
                        cfg.seed ^ ((shape_index as u64) << 48) ^ ((layout_index as u64) << 40) ^ restart as u64;
                    let mut rng = ChaCha8Rng::seed_from_u64(stream);
                    (0..2 * free).map(|_| rng.gen_range(-1.5..1.5)).collect()
                };
                let out = lsq::minimize(objective, &x0, &lm);
                let q = build_q(layout, &out.x, d);
                let Ok(conj) = local_conjugate(&s.matrix, &q, d, m) else {
                    continue;
                };
                let residual = conj.max_abs_diff(&r.matrix);
                if !residual.is_finite() {
                    continue;
                }
                if best.as_ref().is_none_or(|b| residual < b.residual) {
                    best = Some(LocalConjugation { q, residual, shape });
                }
                if residual <= 1e-14 {
                    break;
                }
            }
        }
        if let Some(found) = best.filter(|b| b.residual <= WITNESS_TOL) {
            return Ok(Some(found));
        }
    }
    Ok(None)
}

/// Scalars `λ` for which `λ·base` and `target` share their spectrum.
fn scalar_candidates(base: &ComplexMatrix, target: &ComplexMatrix) -> Vec<Complex> {
    let one = Complex::new(1.0, 0.0);
    let (Ok(eb), Ok(et)) = (base.eigenvalues(), target.eigenvalues()) else {
        return vec![one];
    };
    let Some(pivot) = eb.iter().copied().find(|z| z.norm() > 1e-12) else {
        return vec![one];
    };
    let mut out: Vec<Complex> = Vec::new();
    for t in &et {
        let lambda = t / pivot;
        if out.iter().any(|l| (l - lambda).norm() <= 1e-6) {
            continue;
        }
        let scaled: Vec<Complex> = eb.iter().map(|z| z * lambda).collect();
        if multiset_distance(&scaled, &et) <= 1e-6 {
            out.push(lambda);
        }
    }
    out.sort_by(|a, b| a.arg().total_cmp(&b.arg()));
    out
}

/// Looks for a gauge sequence `[inverse?, scalar, local_conj]` from `source`
/// to `target`, trying without inversion first.
pub fn find_equivalence(
    source: &RMatrix,
    target: &RMatrix,
    shapes: &[ConjugatorShape],
    cfg: &ConjugationSearch,
) -> Result<Option<EquivalenceWitness>> {
    if source.signature != target.signature {
        return Err(GybeError::DimensionMismatch("signatures differ".into()));
    }
    for use_inverse in [false, true] {
        let base = if use_inverse {
            apply_gauge(source, &GaugeOp::Inverse)?
        } else {
            source.clone()
        };
        for lambda in scalar_candidates(&base.matrix, &target.matrix) {
            let scaled = apply_gauge(&base, &GaugeOp::Scalar { lambda })?;
            let Some(found) = search_local_conjugation(target, &scaled, shapes, cfg)? else {
                continue;
            };
            let mut ops = Vec::new();
            if use_inverse {
                ops.push(GaugeOp::Inverse);
            }
            ops.push(GaugeOp::Scalar { lambda });
            ops.push(GaugeOp::LocalConj { q: found.q });
            let residual = apply_all(source, &ops)?.matrix.max_abs_diff(&target.matrix);
            if residual <= WITNESS_TOL {
                return Ok(Some(EquivalenceWitness {
                    ops,
                    residual,
                    source: source.label.clone(),
                    target: target.label.clone(),
                }));
            }
        }
    }
    Ok(None)
}
