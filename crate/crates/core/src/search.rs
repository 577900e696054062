//! Numerical search for unitary gYBE solutions with a prescribed zero
//! pattern.
//!
//! Each restart minimizes `|LSL - SLS|² + |RR† - I|²` over the entries the
//! pattern allows, with damped least squares from a seeded random start.
//! Candidates below the target are certified independently, then
//! deduplicated up to scalar gauge by their spectra.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::blocks::{rowell_solution, STRUCTURE_TOL};
use crate::error::{GybeError, Result};
use crate::linalg::{multiset_key, Complex, ComplexMatrix, Tolerance};
use crate::lsq::{self, LmConfig};
use crate::yang_baxter::{check_gybe_matrix, gybe_difference, GybeSignature};

/// Largest pattern the search accepts.
pub const MAX_PATTERN_SIZE: usize = 16;

/// Which entries of the candidate may be nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroPattern {
    size: usize,
    mask: Vec<Vec<bool>>,
}

impl ZeroPattern {
    pub fn new(mask: Vec<Vec<bool>>) -> Result<Self> {
        let size = mask.len();
        if size == 0 || size > MAX_PATTERN_SIZE {
            return Err(GybeError::InvalidParameter(format!(
                "pattern size must be in 1..={MAX_PATTERN_SIZE}, got {size}"
            )));
        }
        if let Some(row) = mask.iter().position(|r| r.len() != size) {
            return Err(GybeError::DimensionMismatch(format!(
                "pattern row {row} has {} entries, expected {size}",
                mask[row].len()
            )));
        }
        Ok(Self { size, mask })
    }

    /// Nonzero positions of `m` (entries with modulus above `1e-12`).
    pub fn from_matrix(m: &ComplexMatrix) -> Result<Self> {
        let n = m.ensure_square()?;
        Self::new(
            (0..n)
                .map(|i| (0..n).map(|j| m[(i, j)].norm() > 1e-12).collect())
                .collect(),
        )
    }

    pub fn diagonal(size: usize) -> Result<Self> {
        Self::new((0..size).map(|i| (0..size).map(|j| i == j).collect()).collect())
    }

    pub fn full(size: usize) -> Result<Self> {
        Self::new(vec![vec![true; size]; size])
    }

    /// Dense blocks of side `block` along the diagonal.
    pub fn block_diagonal(size: usize, block: usize) -> Result<Self> {
        if block == 0 || !size.is_multiple_of(block) {
            return Err(GybeError::InvalidParameter(format!(
                "block size {block} does not divide {size}"
            )));
        }
        Self::new(
            (0..size)
                .map(|i| (0..size).map(|j| i / block == j / block).collect())
                .collect(),
        )
    }

    /// The support of the Rowell solution.
    pub fn rowell() -> Self {
        Self::from_matrix(&rowell_solution().matrix).expect("8x8")
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn mask(&self) -> &[Vec<bool>] {
        &self.mask
    }

    pub fn allows(&self, i: usize, j: usize) -> bool {
        self.mask[i][j]
    }

    /// Allowed positions in row-major order.
    pub fn positions(&self) -> Vec<(usize, usize)> {
        (0..self.size)
            .flat_map(|i| (0..self.size).map(move |j| (i, j)))
            .filter(|&(i, j)| self.mask[i][j])
            .collect()
    }

    pub fn respects(&self, m: &ComplexMatrix) -> bool {
        m.rows() == self.size
            && m.cols() == self.size
            && (0..self.size).all(|i| (0..self.size).all(|j| self.mask[i][j] || m[(i, j)].norm() == 0.0))
    }

    /// Parses either a JSON object `{"size": n, "mask": [[bool]]}` or a text
    /// grid of `0`/`1` rows (whitespace between digits is ignored).
    pub fn parse(text: &str) -> Result<Self> {
        let trimmed = text.trim();
        if trimmed.starts_with('{') {
            let p: ZeroPattern =
                serde_json::from_str(trimmed).map_err(|e| GybeError::Parse(format!("pattern JSON: {e}")))?;
            let checked = Self::new(p.mask)?;
            if checked.size != p.size {
                return Err(GybeError::DimensionMismatch(format!(
                    "pattern declares size {} but mask has {} rows",
                    p.size, checked.size
                )));
            }
            return Ok(checked);
        }
        let mask = trimmed
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|line| {
                line.chars()
                    .filter(|ch| !ch.is_whitespace())
                    .map(|ch| match ch {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        other => Err(GybeError::Parse(format!("pattern: unexpected character {other:?}"))),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(mask)
    }
}

impl FromStr for ZeroPattern {
    type Err = GybeError;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for ZeroPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.mask {
            let line: String = row.iter().map(|&b| if b { '1' } else { '0' }).collect();
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// How the free entries are encoded as real unknowns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Parameterization {
    /// Real and imaginary part of every allowed entry.
    FreeComplex,
    /// One phase per allowed entry; the entry is `e^{iφ}/√k` with `k` the
    /// number of allowed entries in its row.
    UnitModulus,
}

impl FromStr for Parameterization {
    type Err = GybeError;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "free-complex" | "free" => Ok(Self::FreeComplex),
            "unit-modulus" | "unit" => Ok(Self::UnitModulus),
            other => Err(GybeError::Parse(format!("unknown parameterization {other:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub tolerance: Tolerance,
    pub restarts: usize,
    pub seed: u64,
    pub max_iterations: usize,
    pub parameterization: Parameterization,
    /// Starting point of restart 0 instead of a random draw.
    pub initial: Option<ComplexMatrix>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            tolerance: Tolerance::SEARCH,
            restarts: 64,
            seed: 0,
            max_iterations: 200,
            parameterization: Parameterization::FreeComplex,
            initial: None,
        }
    }
}

/// Maps real unknowns to a pattern-respecting matrix.
struct Encoding {
    size: usize,
    positions: Vec<(usize, usize)>,
    row_weight: Vec<f64>,
    kind: Parameterization,
}

impl Encoding {
    fn new(pattern: &ZeroPattern, kind: Parameterization) -> Self {
        let row_weight = pattern
            .mask()
            .iter()
            .map(|row| {
                let k = row.iter().filter(|&&b| b).count().max(1);
                1.0 / (k as f64).sqrt()
            })
            .collect();
        Self {
            size: pattern.size(),
            positions: pattern.positions(),
            row_weight,
            kind,
        }
    }

    fn unknowns(&self) -> usize {
        match self.kind {
            Parameterization::FreeComplex => 2 * self.positions.len(),
            Parameterization::UnitModulus => self.positions.len(),
        }
    }

    fn decode(&self, x: &[f64]) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.size, self.size);
        for (k, &(i, j)) in self.positions.iter().enumerate() {
            m[(i, j)] = match self.kind {
                Parameterization::FreeComplex => Complex::new(x[2 * k], x[2 * k + 1]),
                Parameterization::UnitModulus => Complex::from_polar(self.row_weight[i], x[k]),
            };
        }
        m
    }

    fn encode(&self, m: &ComplexMatrix) -> Vec<f64> {
        match self.kind {
            Parameterization::FreeComplex => self
                .positions
                .iter()
                .flat_map(|&(i, j)| [m[(i, j)].re, m[(i, j)].im])
                .collect(),
            Parameterization::UnitModulus => self.positions.iter().map(|&(i, j)| m[(i, j)].arg()).collect(),
        }
    }

    fn random(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        match self.kind {
            Parameterization::FreeComplex => self
                .positions
                .iter()
                .flat_map(|_| {
                    let r = rng.gen::<f64>().sqrt();
                    let phi = rng.gen_range(0.0..2.0 * PI);
                    [r * phi.cos(), r * phi.sin()]
                })
                .collect(),
            Parameterization::UnitModulus => (0..self.positions.len())
                .map(|_| rng.gen_range(0.0..2.0 * PI))
                .collect(),
        }
    }
}

/// Appends the real and imaginary parts of `LSL - SLS` and `RR† - I`.
fn push_residuals(m: &ComplexMatrix, sig: GybeSignature, out: &mut Vec<f64>) {
    let diff = gybe_difference(m, sig).expect("size checked by caller");
    let gram = &m.matmul(&m.dagger()) - &ComplexMatrix::identity(m.rows());
    for z in diff.entries().iter().chain(gram.entries()) {
        out.push(z.re);
        out.push(z.im);
    }
}

fn check_size(size: usize, sig: GybeSignature) -> Result<()> {
    if size != sig.matrix_size() {
        return Err(GybeError::DimensionMismatch(format!(
            "pattern of size {size} does not fit signature {sig} (needs {})",
            sig.matrix_size()
        )));
    }
    Ok(())
}

/// `Σ|LSL - SLS|² + Σ|RR† - I|²`; zero exactly on unitary solutions.
pub fn gybe_objective(candidate: &ComplexMatrix, pattern: &ZeroPattern, sig: GybeSignature) -> Result<f64> {
    check_size(pattern.size(), sig)?;
    if !pattern.respects(candidate) {
        return Err(GybeError::InvalidParameter(
            "candidate has entries outside the pattern".into(),
        ));
    }
    let mut r = Vec::new();
    push_residuals(candidate, sig, &mut r);
    Ok(r.iter().map(|v| v * v).sum())
}

/// A certified solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoundSolution {
    pub matrix: ComplexMatrix,
    /// Largest entry of `LSL - SLS`.
    pub residual: f64,
    /// Largest entry of `RR† - I`.
    pub unitarity_residual: f64,
    pub objective: f64,
    pub restart: usize,
    pub dedup_key: String,
}

/// Outcome of a search, including failed restarts.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct SearchResult {
    pub solutions: Vec<FoundSolution>,
    /// Objective after each accepted step, per restart.
    pub traces: Vec<Vec<f64>>,
    pub best_objective: f64,
    /// Number of certified candidates before deduplication.
    pub candidates: usize,
}

impl SearchResult {
    /// Adds a solution unless one with the same key is present; a duplicate
    /// with a smaller residual replaces the stored one. Returns whether the
    /// number of classes grew.
    pub fn insert(&mut self, s: FoundSolution) -> bool {
        match self.solutions.iter_mut().find(|t| t.dedup_key == s.dedup_key) {
            Some(existing) => {
                if s.residual < existing.residual {
                    *existing = s;
                }
                false
            }
            None => {
                self.solutions.push(s);
                true
            }
        }
    }

    pub fn class_count(&self) -> usize {
        self.solutions.len()
    }
}

/// Spectrum of `m` scaled by the reciprocal of one of its eigenvalues,
/// choosing the eigenvalue that makes the rounded key smallest. Invariant
/// under similarity and under scaling of `m`.
fn normalized_spectrum(m: &ComplexMatrix, extra: &[&ComplexMatrix]) -> Option<Vec<Vec<(i64, i64)>>> {
    let eig = m.eigenvalues().ok()?;
    let extras: Vec<Vec<Complex>> = extra.iter().map(|b| b.eigenvalues().ok()).collect::<Option<_>>()?;
    eig.iter()
        .filter(|z| z.norm() > 1e-9)
        .map(|&pivot| {
            let key = |values: &[Complex]| {
                let mut k: Vec<(i64, i64)> = values.iter().map(|z| multiset_key(&(z / pivot))).collect();
                k.sort_unstable();
                k
            };
            std::iter::once(key(&eig))
                .chain(extras.iter().map(|e| key(e)))
                .collect::<Vec<_>>()
        })
        .min()
}

/// Dedup key: the scalar-normalized spectrum of `m`, of its diagonal `4x4`
/// blocks when `m` is an `8x8` direct sum, and the ratio of the diagonal of
/// the top-right `2x2` block of `X` when that block is diagonal and
/// invertible.
pub fn dedup_key(m: &ComplexMatrix) -> String {
    let n = m.rows();
    let is_block_sum =
        n == 8 && (0..8).all(|i| (0..8).all(|j| (i < 4) == (j < 4) || m[(i, j)].norm() <= STRUCTURE_TOL));
    let mut parts = Vec::new();
    let spectra = if is_block_sum {
        let x = m.block(0, 0, 4);
        let y = m.block(4, 4, 4);
        normalized_spectrum(m, &[&x, &y])
    } else {
        normalized_spectrum(m, &[])
    };
    match spectra {
        Some(s) => {
            for block in s {
                let text: Vec<String> = block.iter().map(|(a, b)| format!("{a}:{b}")).collect();
                parts.push(text.join(","));
            }
        }
        None => parts.push("spectrum?".into()),
    }
    if is_block_sum {
        let (b11, b22) = (m[(0, 2)], m[(1, 3)]);
        let off_diagonal = m[(0, 3)].norm().max(m[(1, 2)].norm());
        if b11.norm() > STRUCTURE_TOL && off_diagonal <= STRUCTURE_TOL {
            let (a, b) = multiset_key(&(b22 / b11));
            parts.push(format!("ratio={a}:{b}"));
        }
    }
    parts.join("|")
}

/// Runs `cfg.restarts` independent minimizations in parallel and returns
/// the certified, deduplicated solutions. Deterministic for a fixed config.
pub fn solve_pattern(pattern: &ZeroPattern, sig: GybeSignature, cfg: &SearchConfig) -> Result<SearchResult> {
    check_size(pattern.size(), sig)?;
    if cfg.restarts == 0 || cfg.max_iterations == 0 {
        return Err(GybeError::InvalidParameter(
            "restarts and max_iterations must be positive".into(),
        ));
    }
    if let Some(init) = &cfg.initial {
        if init.rows() != pattern.size() || init.cols() != pattern.size() {
            return Err(GybeError::DimensionMismatch(
                "initial matrix does not match the pattern".into(),
            ));
        }
    }
    let tol = cfg.tolerance.value();
    let encoding = Encoding::new(pattern, cfg.parameterization);
    let lm = LmConfig {
        max_iterations: cfg.max_iterations,
        target_cost: tol * tol,
        ..Default::default()
    };
    let certify = Tolerance::new(10.0 * tol)?;

    let runs: Vec<(usize, lsq::LmOutcome)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|restart| {
            let x0 = match (&cfg.initial, restart) {
                (Some(init), 0) => encoding.encode(init),
                _ => {
                    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                    rng.set_stream(restart as u64);
                    encoding.random(&mut rng)
                }
            };
            debug_assert_eq!(x0.len(), encoding.unknowns());
            let objective = |x: &[f64], out: &mut Vec<f64>| push_residuals(&encoding.decode(x), sig, out);
            (restart, lsq::minimize(objective, &x0, &lm))
        })
        .collect();

    let mut result = SearchResult {
        best_objective: f64::INFINITY,
        ..Default::default()
    };
    let mut accepted = Vec::new();
    for (restart, run) in runs {
        result.best_objective = result.best_objective.min(run.cost);
        result.traces.push(run.trace);
        if run.cost > tol * tol {
            continue;
        }
        let matrix = encoding.decode(&run.x);
        let check = check_gybe_matrix(&matrix, sig, certify)?;
        let unitary = matrix.is_unitary(certify)?;
        if !check.passed || !unitary.unitary {
            continue;
        }
        accepted.push(FoundSolution {
            dedup_key: dedup_key(&matrix),
            residual: check.residual,
            unitarity_residual: unitary.residual,
            objective: run.cost,
            restart,
            matrix,
        });
    }
    result.candidates = accepted.len();
    // Merge by restart index, then residual.
    accepted.sort_by(|a, b| a.restart.cmp(&b.restart).then(a.residual.total_cmp(&b.residual)));
    for s in accepted {
        result.insert(s);
    }
    Ok(result)
}

/// Number of solutions per dedup class, for reporting.
pub fn class_histogram(candidates: &[FoundSolution]) -> BTreeMap<String, usize> {
    let mut map = BTreeMap::new();
    for s in candidates {
        *map.entry(s.dedup_key.clone()).or_insert(0) += 1;
    }
    map
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::{base_solution, Family};
    use crate::linalg::{c, cis};

    fn sig231() -> GybeSignature {
        GybeSignature::new(2, 3, 1).unwrap()
    }

    #[test]
    fn objective_examples() {
        let r = rowell_solution().matrix;
        let p = ZeroPattern::rowell();
        assert!(gybe_objective(&r, &p, sig231()).unwrap() <= 1e-26);
        let id = ComplexMatrix::identity(8);
        assert_eq!(
            gybe_objective(&id, &ZeroPattern::diagonal(8).unwrap(), sig231()).unwrap(),
            0.0
        );
        let mut broken = r.clone();
        broken[(0, 0)] = c(0.0, 0.0);
        assert!(gybe_objective(&broken, &p, sig231()).unwrap() > 1e-3);
        let full = ComplexMatrix::from_fn(8, 8, |_, _| c(0.1, 0.0));
        assert!(gybe_objective(&full, &ZeroPattern::rowell(), sig231()).is_err());
    }

    #[test]
    fn pattern_formats() {
        let p = ZeroPattern::rowell();
        let text = p.to_string();
        assert_eq!(text.parse::<ZeroPattern>().unwrap(), p);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(ZeroPattern::parse(&json).unwrap(), p);
        assert!(ZeroPattern::parse("10\n012").is_err());
        assert!(ZeroPattern::parse("1x\n01").is_err());
        assert!(ZeroPattern::parse(r#"{"size": 3, "mask": [[true, false], [false, true]]}"#).is_err());
    }

    #[test]
    fn rowell_pattern_has_two_entries_per_row() {
        let p = ZeroPattern::rowell();
        assert!(p.mask().iter().all(|row| row.iter().filter(|&&b| b).count() == 2));
    }

    #[test]
    fn seeded_at_exact_solution_converges_immediately() {
        let start = base_solution(Family::Second).matrix();
        let cfg = SearchConfig {
            restarts: 1,
            initial: Some(start),
            ..Default::default()
        };
        let out = solve_pattern(&ZeroPattern::block_diagonal(8, 4).unwrap(), sig231(), &cfg).unwrap();
        assert_eq!(out.solutions.len(), 1);
        assert!(out.solutions[0].objective <= 1e-22);
    }

    #[test]
    fn dedup_ignores_scalar_phase() {
        let m = base_solution(Family::Third).matrix();
        assert_eq!(dedup_key(&m), dedup_key(&m.scale(cis(0.731))));
        assert_ne!(dedup_key(&m), dedup_key(&base_solution(Family::First).matrix()));
    }

    #[test]
    fn size_mismatch_is_an_error() {
        let cfg = SearchConfig::default();
        assert!(solve_pattern(&ZeroPattern::diagonal(4).unwrap(), sig231(), &cfg).is_err());
    }
}
