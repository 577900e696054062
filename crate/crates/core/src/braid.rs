//! Braid group representations afforded by far-commuting R-matrices.
//!
//! Word convention: a word `s_1 s_2 ... s_k` evaluates to the matrix product
//! `ρ(s_1) ρ(s_2) ... ρ(s_k)` in written order. Acting on a column state, the
//! last letter is therefore applied first.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{GybeError, Result};
use crate::linalg::{Complex, ComplexMatrix, Tolerance};
use crate::yang_baxter::{braid_generator_matrix, RMatrix};

/// Generators are treated as unitary (inverse = adjoint) below this residual.
const UNITARY_TOL: f64 = 1e-10;

/// States must have unit norm to this accuracy.
pub const STATE_NORM_TOL: f64 = 1e-10;

/// A word in the standard generators of the braid group on `n` strands;
/// letter `-i` stands for the inverse of `σ_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraidWord {
    n: usize,
    letters: Vec<i64>,
}

impl BraidWord {
    pub fn new(n: usize, letters: Vec<i64>) -> Result<Self> {
        if n < 2 {
            return Err(GybeError::InvalidParameter(format!("need at least 2 strands, got {n}")));
        }
        if let Some(&bad) = letters.iter().find(|&&x| x == 0 || x.unsigned_abs() as usize > n - 1) {
            return Err(GybeError::IndexOutOfRange { index: bad, n });
        }
        Ok(Self { n, letters })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(n, Vec::new())
    }

    pub fn strands(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[i64] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Concatenation `self` followed by `other`.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(GybeError::DimensionMismatch(format!(
                "words on {} and {} strands",
                self.n, other.n
            )));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(Self { n: self.n, letters })
    }

    pub fn inverse(&self) -> Self {
        Self {
            n: self.n,
            letters: self.letters.iter().rev().map(|x| -x).collect(),
        }
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}:", self.n)?;
        for (k, x) in self.letters.iter().enumerate() {
            write!(f, "{}{x}", if k == 0 { " " } else { "," })?;
        }
        Ok(())
    }
}

/// Parses `"n=4: 1,2,-1,3"`. Whitespace is ignored; the letter list may be
/// empty.
impl FromStr for BraidWord {
    type Err = GybeError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| GybeError::Parse(format!("braid word {s:?}: {msg}"));
        let (head, body) = s.split_once(':').ok_or_else(|| bad("missing ':'"))?;
        let n = head
            .trim()
            .strip_prefix("n=")
            .or_else(|| head.trim().strip_prefix("n ="))
            .ok_or_else(|| bad("header must be n=<strands>"))?
            .trim()
            .parse::<usize>()
            .map_err(|_| bad("bad strand count"))?;
        let letters = if body.trim().is_empty() {
            Vec::new()
        } else {
            body.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<i64>()
                        .map_err(|_| bad(&format!("bad letter {:?}", t.trim())))
                })
                .collect::<Result<Vec<_>>>()?
        };
        Self::new(n, letters)
    }
}

/// A unit vector in the representation space.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(GybeError::InvalidParameter("empty state".into()));
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>();
        if (norm - 1.0).abs().is_nan() || (norm - 1.0).abs() > STATE_NORM_TOL {
            return Err(GybeError::InvalidParameter(format!(
                "state has squared norm {norm}, expected 1"
            )));
        }
        Ok(Self { amplitudes })
    }

    /// The standard basis vector `e_k`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(GybeError::DimensionMismatch(format!("basis index {k} >= {dim}")));
        }
        let mut amplitudes = vec![Complex::new(0.0, 0.0); dim];
        amplitudes[k] = Complex::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    /// Reads a `dim x 1` (or `1 x dim`) matrix.
    pub fn from_matrix(m: &ComplexMatrix) -> Result<Self> {
        if m.cols() != 1 && m.rows() != 1 {
            return Err(GybeError::DimensionMismatch(format!(
                "state must be a column, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        Self::new(m.entries().to_vec())
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::column(self.amplitudes.clone()).expect("nonempty")
    }

    pub fn amplitudes(&self) -> &[Complex] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Serialized as a column matrix.
impl Serialize for StateVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_matrix().serialize(s)
    }
}

impl<'de> Deserialize<'de> for StateVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = ComplexMatrix::deserialize(d)?;
        Self::from_matrix(&m).map_err(serde::de::Error::custom)
    }
}

/// `σ_i -> I^{⊗l(i-1)} ⊗ R ⊗ I^{⊗l(n-i-1)}` on `n` strands, with every
/// relation checked at construction.
#[derive(Debug, Clone)]
pub struct BraidRep {
    r: RMatrix,
    n: usize,
    dim: usize,
    unitary: bool,
    generators: Vec<ComplexMatrix>,
    inverses: Vec<ComplexMatrix>,
    braid_residual: f64,
    far_residual: f64,
}

impl BraidRep {
    pub fn build(r: &RMatrix, n: usize, tol: Tolerance) -> Result<Self> {
        if n < 2 {
            return Err(GybeError::InvalidParameter(format!("need at least 2 strands, got {n}")));
        }
        let unitary = r.matrix.is_unitary(Tolerance::new(UNITARY_TOL)?)?.unitary;
        let generators = (1..n)
            .map(|i| braid_generator_matrix(r, n, i))
            .collect::<Result<Vec<_>>>()?;
        let inverses = if unitary {
            generators.iter().map(ComplexMatrix::dagger).collect()
        } else {
            generators
                .iter()
                .map(ComplexMatrix::inverse)
                .collect::<Result<Vec<_>>>()?
        };
        let dim = generators[0].rows();

        let mut braid_residual: f64 = 0.0;
        let mut far_residual: f64 = 0.0;
        for i in 0..generators.len() {
            for j in i + 1..generators.len() {
                let (a, b) = (&generators[i], &generators[j]);
                let residual = if j == i + 1 {
                    let ab = a.matmul(b);
                    let ba = b.matmul(a);
                    ab.matmul(a).max_abs_diff(&ba.matmul(b))
                } else {
                    a.matmul(b).max_abs_diff(&b.matmul(a))
                };
                if !tol.accepts(residual) {
                    return Err(GybeError::Representation {
                        first: i + 1,
                        second: j + 1,
                        residual,
                    });
                }
                if j == i + 1 {
                    braid_residual = braid_residual.max(residual);
                } else {
                    far_residual = far_residual.max(residual);
                }
            }
        }

        Ok(Self {
            r: r.clone(),
            n,
            dim,
            unitary,
            generators,
            inverses,
            braid_residual,
            far_residual,
        })
    }

    pub fn r_matrix(&self) -> &RMatrix {
        &self.r
    }

    pub fn strands(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_unitary(&self) -> bool {
        self.unitary
    }

    /// `ρ(σ_i)`, 1-based.
    pub fn generator(&self, i: usize) -> Result<&ComplexMatrix> {
        self.generators
            .get(i.wrapping_sub(1))
            .ok_or(GybeError::IndexOutOfRange {
                index: i as i64,
                n: self.n,
            })
    }

    pub fn generators(&self) -> &[ComplexMatrix] {
        &self.generators
    }

    /// Largest residual of `σ_i σ_{i+1} σ_i = σ_{i+1} σ_i σ_{i+1}` found at
    /// construction.
    pub fn braid_residual(&self) -> f64 {
        self.braid_residual
    }

    /// Largest commutator residual over pairs with `|i - j| >= 2`.
    pub fn far_residual(&self) -> f64 {
        self.far_residual
    }

    fn letter_matrix(&self, letter: i64) -> &ComplexMatrix {
        let k = letter.unsigned_abs() as usize - 1;
        if letter > 0 {
            &self.generators[k]
        } else {
            &self.inverses[k]
        }
    }

    fn check_word(&self, w: &BraidWord) -> Result<()> {
        if w.n != self.n {
            return Err(GybeError::DimensionMismatch(format!(
                "word on {} strands, representation on {}",
                w.n, self.n
            )));
        }
        Ok(())
    }

    pub fn evaluate_word(&self, w: &BraidWord) -> Result<ComplexMatrix> {
        self.check_word(w)?;
        Ok(w.letters.iter().fold(ComplexMatrix::identity(self.dim), |acc, &x| {
            acc.matmul(self.letter_matrix(x))
        }))
    }

    /// `ρ(w) s`, applying letters right to left.
    pub fn apply_to_state(&self, w: &BraidWord, s: &StateVector) -> Result<StateVector> {
        self.check_word(w)?;
        if s.dim() != self.dim {
            return Err(GybeError::DimensionMismatch(format!(
                "state of length {}, representation of dimension {}",
                s.dim(),
                self.dim
            )));
        }
        let v = w
            .letters
            .iter()
            .rev()
            .fold(s.to_matrix(), |acc, &x| self.letter_matrix(x).matmul(&acc));
        Ok(StateVector {
            amplitudes: v.into_entries(),
        })
    }

    /// Finds `(i, λ)` with `u = λ ρ(σ_i)` entrywise within `tol`. `λ` is read
    /// off the largest-modulus entry of `u`.
    pub fn recognize_braiding_gate(&self, u: &ComplexMatrix, tol: Tolerance) -> Option<(usize, Complex)> {
        if u.rows() != self.dim || u.cols() != self.dim {
            return None;
        }
        let (k, _) = u
            .entries()
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))?;
        if u.entries()[k].norm() == 0.0 {
            return None;
        }
        self.generators.iter().enumerate().find_map(|(i, g)| {
            let reference = g.entries()[k];
            if reference.norm() == 0.0 {
                return None;
            }
            let lambda = u.entries()[k] / reference;
            tol.accepts(u.max_abs_diff(&g.scale(lambda))).then_some((i + 1, lambda))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::{base_solution, rowell_solution, Family};
    use crate::linalg::{c, cis};

    fn tol(v: f64) -> Tolerance {
        Tolerance::new(v).unwrap()
    }

    #[test]
    fn word_text_round_trip() {
        let w: BraidWord = "n=4: 1,2,-1,3".parse().unwrap();
        assert_eq!(w.letters(), &[1, 2, -1, 3]);
        assert_eq!(w.to_string(), "n=4: 1,2,-1,3");
        assert_eq!(w.to_string().parse::<BraidWord>().unwrap(), w);
        let e: BraidWord = "n=3:".parse().unwrap();
        assert!(e.is_empty());
        assert_eq!(e.to_string().parse::<BraidWord>().unwrap(), e);
    }

    #[test]
    fn bad_words_are_rejected() {
        assert!("n=3: 1,3".parse::<BraidWord>().is_err());
        assert!("n=3: 0".parse::<BraidWord>().is_err());
        assert!("3: 1".parse::<BraidWord>().is_err());
        assert!("n=1:".parse::<BraidWord>().is_err());
        assert!("n=3: 1,x".parse::<BraidWord>().is_err());
    }

    #[test]
    fn rowell_rep_on_three_strands() {
        let rep = BraidRep::build(&rowell_solution(), 3, tol(1e-13)).unwrap();
        assert_eq!(rep.dim(), 16);
        assert!(rep.braid_residual() <= 1e-13);
    }

    #[test]
    fn cancellation_and_empty_word() {
        let rep = BraidRep::build(&rowell_solution(), 3, tol(1e-12)).unwrap();
        let id = ComplexMatrix::identity(16);
        assert_eq!(rep.evaluate_word(&BraidWord::identity(3).unwrap()).unwrap(), id);
        let w = BraidWord::new(3, vec![1, -1]).unwrap();
        assert!(rep.evaluate_word(&w).unwrap().approx_eq(&id, 1e-13));
        let other = BraidWord::new(4, vec![1]).unwrap();
        assert!(rep.evaluate_word(&other).is_err());
    }

    #[test]
    fn first_generator_column_on_e0() {
        let r = base_solution(Family::First).to_rmatrix("base1").unwrap();
        let rep = BraidRep::build(&r, 3, tol(1e-12)).unwrap();
        let out = rep
            .apply_to_state(
                &BraidWord::new(3, vec![1]).unwrap(),
                &StateVector::basis(16, 0).unwrap(),
            )
            .unwrap();
        let g = rep.generator(1).unwrap();
        for (k, z) in out.amplitudes().iter().enumerate() {
            assert!((z - g[(k, 0)]).norm() < 1e-15);
        }
        assert!((out.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gate_recognition() {
        let rep = BraidRep::build(&rowell_solution(), 3, tol(1e-12)).unwrap();
        let g2 = rep.generator(2).unwrap().clone();
        let (i, lambda) = rep.recognize_braiding_gate(&g2, tol(1e-12)).unwrap();
        assert_eq!(i, 2);
        assert!((lambda - c(1.0, 0.0)).norm() < 1e-14);

        let phase = cis(std::f64::consts::PI / 7.0);
        let g1 = rep.generator(1).unwrap().scale(phase);
        let (i, lambda) = rep.recognize_braiding_gate(&g1, tol(1e-12)).unwrap();
        assert_eq!(i, 1);
        assert!((lambda - phase).norm() < 1e-14);

        let prod = rep.generator(1).unwrap().matmul(rep.generator(2).unwrap());
        assert!(rep.recognize_braiding_gate(&prod, tol(1e-9)).is_none());
    }

    #[test]
    fn non_unit_state_is_rejected() {
        assert!(StateVector::new(vec![c(1.0, 0.0), c(1.0, 0.0)]).is_err());
        let s = StateVector::basis(4, 2).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(serde_json::from_str::<StateVector>(&json).unwrap(), s);
    }
}
