//! Damped Gauss-Newton (Levenberg) minimization of `sum r_k(x)^2` with a
//! central-difference Jacobian.
//!
//! A step is accepted only when it lowers the cost, so the recorded trace is
//! non-increasing. Damping grows tenfold on rejection and shrinks threefold on
//! acceptance.

/// Solver settings.
#[derive(Debug, Clone)]
pub struct LmConfig {
    pub max_iterations: usize,
    pub initial_damping: f64,
    pub damping_increase: f64,
    pub damping_decrease: f64,
    /// Central-difference step for the numeric Jacobian.
    pub jacobian_step: f64,
    /// Stop as soon as the cost drops to this value.
    pub target_cost: f64,
    /// Stop when an accepted step is shorter than this.
    pub min_step: f64,
}

impl Default for LmConfig {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            initial_damping: 1e-3,
            damping_increase: 10.0,
            damping_decrease: 3.0,
            jacobian_step: 1e-7,
            target_cost: 0.0,
            min_step: 1e-15,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    TargetReached,
    SmallStep,
    MaxIterations,
    /// Damping exploded without finding a descent step.
    Stalled,
}

#[derive(Debug, Clone)]
pub struct LmOutcome {
    pub x: Vec<f64>,
    pub cost: f64,
    /// Cost after each accepted step, starting with the initial cost.
    pub trace: Vec<f64>,
    pub iterations: usize,
    pub stop: StopReason,
}

fn cost_of(r: &[f64]) -> f64 {
    r.iter().map(|v| v * v).sum()
}

/// Solves `(H + mu I) dx = -g` for symmetric positive-definite `H + mu I` by
/// Cholesky factorization. Returns `None` if the factorization breaks down.
fn solve_damped(h: &[f64], g: &[f64], mu: f64, n: usize) -> Option<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = h[i * n + j] + if i == j { mu } else { 0.0 };
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if s <= 0.0 || !s.is_finite() {
                    return None;
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut s = -g[i];
        for k in 0..i {
            s -= l[i * n + k] * y[k];
        }
        y[i] = s / l[i * n + i];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in i + 1..n {
            s -= l[k * n + i] * x[k];
        }
        x[i] = s / l[i * n + i];
    }
    Some(x)
}

/// Minimizes the squared norm of `residuals(x, out)`, which must always
/// write the same number of entries into `out` (it is cleared beforehand).
pub fn minimize<F>(residuals: F, x0: &[f64], cfg: &LmConfig) -> LmOutcome
where
    F: Fn(&[f64], &mut Vec<f64>),
{
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut r = Vec::new();
    residuals(&x, &mut r);
    let m = r.len();
    let mut cost = cost_of(&r);
    let mut trace = vec![cost];
    let mut mu = cfg.initial_damping;
    let mut iterations = 0;

    let mut jac = vec![0.0; m * n];
    let mut plus = Vec::with_capacity(m);
    let mut minus = Vec::with_capacity(m);
    let mut trial_r = Vec::with_capacity(m);

    let stop = loop {
        if cost <= cfg.target_cost {
            break StopReason::TargetReached;
        }
        if iterations >= cfg.max_iterations {
            break StopReason::MaxIterations;
        }
        iterations += 1;

        // Jacobian, column by column.
        let mut probe = x.clone();
        for j in 0..n {
            let h = cfg.jacobian_step * x[j].abs().max(1.0);
            probe[j] = x[j] + h;
            plus.clear();
            residuals(&probe, &mut plus);
            probe[j] = x[j] - h;
            minus.clear();
            residuals(&probe, &mut minus);
            probe[j] = x[j];
            for k in 0..m {
                jac[k * n + j] = (plus[k] - minus[k]) / (2.0 * h);
            }
        }

        let mut hess = vec![0.0; n * n];
        let mut grad = vec![0.0; n];
        for k in 0..m {
            let row = &jac[k * n..(k + 1) * n];
            let rk = r[k];
            for i in 0..n {
                let ji = row[i];
                if ji == 0.0 {
                    continue;
                }
                grad[i] += ji * rk;
                for j in 0..=i {
                    hess[i * n + j] += ji * row[j];
                }
            }
        }
        for i in 0..n {
            for j in 0..i {
                hess[j * n + i] = hess[i * n + j];
            }
        }

        let mut accepted = None;
        while mu < 1e20 {
            let Some(dx) = solve_damped(&hess, &grad, mu, n) else {
                mu *= cfg.damping_increase;
                continue;
            };
            let trial: Vec<f64> = x.iter().zip(&dx).map(|(a, b)| a + b).collect();
            trial_r.clear();
            residuals(&trial, &mut trial_r);
            let trial_cost = cost_of(&trial_r);
            if trial_cost.is_finite() && trial_cost < cost {
                mu /= cfg.damping_decrease;
                let step = dx.iter().map(|v| v * v).sum::<f64>().sqrt();
                accepted = Some((trial, trial_cost, step));
                break;
            }
            mu *= cfg.damping_increase;
        }

        match accepted {
            Some((trial, trial_cost, step)) => {
                x = trial;
                std::mem::swap(&mut r, &mut trial_r);
                cost = trial_cost;
                trace.push(cost);
                if step <= cfg.min_step {
                    break StopReason::SmallStep;
                }
            }
            None => break StopReason::Stalled,
        }
    };

    LmOutcome {
        x,
        cost,
        trace,
        iterations,
        stop,
    }
}
