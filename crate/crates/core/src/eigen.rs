//! Eigenvalues of small dense matrices.
//!
//! The characteristic polynomial comes from the Faddeev-LeVerrier recurrence
//! and its roots from Durand-Kerner (Weierstrass) iteration. Durand-Kerner
//! only converges linearly onto a multiple root and leaves the copies spread
//! by roughly `sqrt(eps)`, so clustered roots are collapsed to their centroid
//! and refined with Newton's method on the derivative of matching order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{GybeError, Result};
use crate::linalg::{Complex, ComplexMatrix};

/// Root-finder settings.
#[derive(Debug, Clone)]
pub struct RootConfig {
    pub max_iterations: usize,
    /// Seed of the random perturbation applied to the starting points.
    pub seed: u64,
    /// Roots closer than this (relative to `max(1, |z|)`) form a cluster.
    pub cluster_radius: f64,
}

impl Default for RootConfig {
    fn default() -> Self {
        Self {
            max_iterations: 5000,
            seed: 0x005e_ed0f_e19e,
            cluster_radius: 5e-2,
        }
    }
}

/// Coefficients (ascending degree) of `det(z I - m)` by Faddeev-LeVerrier.
pub(crate) fn faddeev_leverrier(m: &ComplexMatrix) -> Vec<Complex> {
    let n = m.rows();
    let mut coeffs = vec![Complex::new(0.0, 0.0); n + 1];
    coeffs[n] = Complex::new(1.0, 0.0);
    let identity = ComplexMatrix::identity(n);
    let mut acc = ComplexMatrix::zeros(n, n);
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I ;  c_{n-k} = -tr(A M_k) / k
        acc = &m.matmul(&acc) + &identity.scale(coeffs[n - k + 1]);
        let am = m.matmul(&acc);
        coeffs[n - k] = -am.trace() / k as f64;
    }
    coeffs
}

/// Horner evaluation of an ascending-coefficient polynomial.
pub fn eval_poly(coeffs: &[Complex], z: Complex) -> Complex {
    coeffs.iter().rev().fold(Complex::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Magnitude bound `sum |c_k| |z|^k`, used to scale rounding tolerances.
fn eval_bound(coeffs: &[Complex], z: Complex) -> f64 {
    let r = z.norm();
    coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
}

fn derivative(coeffs: &[Complex]) -> Vec<Complex> {
    coeffs.iter().enumerate().skip(1).map(|(k, &c)| c * k as f64).collect()
}

/// All roots (with multiplicity) of a polynomial given by ascending
/// coefficients. The leading coefficient must be nonzero.
pub fn polynomial_roots(coeffs: &[Complex], cfg: &RootConfig) -> Result<Vec<Complex>> {
    let degree = coeffs.len().saturating_sub(1);
    if degree == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[degree];
    if lead.norm() == 0.0 {
        return Err(GybeError::InvalidParameter("leading coefficient is zero".into()));
    }
    let monic: Vec<Complex> = coeffs.iter().map(|&c| c / lead).collect();
    if degree == 1 {
        return Ok(vec![-monic[0]]);
    }

    // Fujiwara bound on root moduli.
    let radius = (0..degree)
        .map(|k| {
            let exp = 1.0 / (degree - k) as f64;
            let c = if k == 0 { monic[0].norm() / 2.0 } else { monic[k].norm() };
            c.powf(exp)
        })
        .fold(0.0, f64::max)
        * 2.0;
    let radius = if radius > 0.0 { radius } else { 1.0 };

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut z: Vec<Complex> = (0..degree)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / degree as f64 + 0.4;
            let jitter = Complex::new(rng.gen_range(-0.05..0.05), rng.gen_range(-0.05..0.05));
            Complex::from_polar(radius * 0.5, angle) * (Complex::new(1.0, 0.0) + jitter)
        })
        .collect();

    let eps = f64::EPSILON;
    let mut converged = false;
    for _ in 0..cfg.max_iterations {
        let mut max_step: f64 = 0.0;
        let mut settled = true;
        for k in 0..degree {
            let p = eval_poly(&monic, z[k]);
            if p.norm() <= 8.0 * degree as f64 * eps * eval_bound(&monic, z[k]) {
                continue;
            }
            settled = false;
            let denom: Complex = (0..degree).filter(|&j| j != k).map(|j| z[k] - z[j]).product();
            if denom.norm() == 0.0 {
                // Coincident estimates: nudge apart.
                z[k] += Complex::new(1e-8, 1e-8);
                continue;
            }
            let step = p / denom;
            z[k] -= step;
            max_step = max_step.max(step.norm() / z[k].norm().max(1.0));
        }
        if settled || max_step <= 1e-15 {
            converged = true;
            break;
        }
    }

    let ok = |z: &[Complex]| {
        z.iter()
            .all(|&r| eval_poly(&monic, r).norm() <= 1e-8 * eval_bound(&monic, r).max(1.0))
    };
    if !converged && !ok(&z) {
        return Err(GybeError::NoConvergence {
            iterations: cfg.max_iterations,
        });
    }

    polish_clusters(&monic, &mut z, cfg.cluster_radius);
    Ok(z)
}

/// Collapses clusters of nearby roots and refines every root with Newton's
/// method on `p^{(k-1)}` for a cluster of size `k`. A merged cluster is kept
/// only if `p, p', ..., p^{(k-1)}` all vanish at the refined point;
/// otherwise it is split again at a ten times smaller radius.
fn polish_clusters(monic: &[Complex], z: &mut [Complex], radius: f64) {
    let all: Vec<usize> = (0..z.len()).collect();
    resolve(monic, z, &all, radius);
}

fn resolve(monic: &[Complex], z: &mut [Complex], indices: &[usize], radius: f64) {
    for members in single_linkage(z, indices, radius) {
        let k = members.len();
        if k > 1 {
            let centroid: Complex = members.iter().map(|&i| z[i]).sum::<Complex>() / k as f64;
            if let Some(x) = refine_multiple(monic, centroid, k) {
                for &i in &members {
                    z[i] = x;
                }
                continue;
            }
            if radius > 1e-8 {
                resolve(monic, z, &members, radius / 10.0);
                continue;
            }
        }
        for &i in &members {
            z[i] = newton(monic, z[i], 1);
        }
    }
}

/// Groups `indices` into clusters whose members are chained by distances
/// below `radius * max(1, |z|)`.
fn single_linkage(z: &[Complex], indices: &[usize], radius: f64) -> Vec<Vec<usize>> {
    let mut taken = vec![false; indices.len()];
    let mut clusters = Vec::new();
    for start in 0..indices.len() {
        if taken[start] {
            continue;
        }
        taken[start] = true;
        let mut members = vec![indices[start]];
        let mut head = 0;
        while head < members.len() {
            let cur = members[head];
            head += 1;
            for (slot, &j) in indices.iter().enumerate() {
                if !taken[slot] && (z[cur] - z[j]).norm() <= radius * z[cur].norm().max(1.0) {
                    taken[slot] = true;
                    members.push(j);
                }
            }
        }
        clusters.push(members);
    }
    clusters
}

/// Refined `k`-fold root near `start`, or `None` if the point found is not
/// a root of multiplicity `k`.
fn refine_multiple(monic: &[Complex], start: Complex, k: usize) -> Option<Complex> {
    let x = newton(monic, start, k);
    let mut poly = monic.to_vec();
    for _ in 0..k - 1 {
        let v = eval_poly(&poly, x).norm();
        if v > 1e-10 * eval_bound(&poly, x).max(1.0) {
            return None;
        }
        poly = derivative(&poly);
    }
    Some(x)
}

/// Newton iteration on `p^{(k-1)}`, keeping the best iterate.
fn newton(monic: &[Complex], start: Complex, k: usize) -> Complex {
    let mut target = monic.to_vec();
    for _ in 1..k {
        target = derivative(&target);
    }
    let target_prime = derivative(&target);
    let mut x = start;
    let mut best = (eval_poly(&target, x).norm(), x);
    for _ in 0..12 {
        let d = eval_poly(&target_prime, x);
        if d.norm() == 0.0 {
            break;
        }
        let next = x - eval_poly(&target, x) / d;
        if !next.is_finite() || (next - start).norm() > 1e-2 * start.norm().max(1.0) {
            break;
        }
        x = next;
        let v = eval_poly(&target, x).norm();
        if v < best.0 {
            best = (v, x);
        }
        if v == 0.0 {
            break;
        }
    }
    best.1
}
