//! Matrix-free BiCGSTAB for the implicit stage systems.

use serde::{Deserialize, Serialize};

pub trait LinearOperator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], out: &mut [f64]);
}

/// A plain function-backed operator, handy in tests and small setups.
pub struct FnOperator<F: Fn(&[f64], &mut [f64])> {
    pub n: usize,
    pub f: F,
}

impl<F: Fn(&[f64], &mut [f64])> LinearOperator for FnOperator<F> {
    fn dim(&self) -> usize {
        self.n
    }
    fn apply(&self, x: &[f64], out: &mut [f64]) {
        (self.f)(x, out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub rel_tol: f64,
    pub abs_floor: f64,
    pub max_iter: usize,
    /// Enable diagonal (Jacobi) preconditioning.
    pub jacobi: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            rel_tol: 1e-10,
            abs_floor: 1e-14,
            max_iter: 1000,
            jacobi: false,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SolveReport {
    pub iterations: usize,
    /// True residual norm ||b - A x||, recomputed from scratch at exit.
    pub final_residual: f64,
    pub converged: bool,
    pub breakdown: bool,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Solve A x = b. On breakdown of the recurrences the iteration restarts once
/// from the current iterate before giving up. `precond_diag`, when given, is
/// used as a Jacobi preconditioner.
pub fn bicgstab(
    op: &dyn LinearOperator,
    b: &[f64],
    x0: &[f64],
    cfg: &SolverConfig,
    precond_diag: Option<&[f64]>,
) -> (Vec<f64>, SolveReport) {
    let n = op.dim();
    assert_eq!(b.len(), n);
    assert_eq!(x0.len(), n);
    let b_norm = norm(b);
    let target = (cfg.rel_tol * b_norm).max(cfg.abs_floor);

    let mut x = x0.to_vec();
    let mut iterations = 0usize;
    let mut breakdown = false;

    let apply_precond = |v: &[f64], out: &mut Vec<f64>| {
        out.clear();
        match precond_diag {
            Some(d) => out.extend(v.iter().zip(d).map(|(&vi, &di)| {
                if di != 0.0 {
                    vi / di
                } else {
                    vi
                }
            })),
            None => out.extend_from_slice(v),
        }
    };

    let mut restarts_left = 1;
    'outer: loop {
        let mut r = vec![0.0; n];
        op.apply(&x, &mut r);
        for i in 0..n {
            r[i] = b[i] - r[i];
        }
        if norm(&r) <= target {
            break;
        }
        let r0 = r.clone();
        let mut rho = 1.0;
        let mut alpha = 1.0;
        let mut omega = 1.0;
        let mut p = vec![0.0; n];
        let mut v = vec![0.0; n];
        let mut phat = Vec::with_capacity(n);
        let mut shat = Vec::with_capacity(n);
        let mut t = vec![0.0; n];

        while iterations < cfg.max_iter {
            iterations += 1;
            let rho_next = dot(&r0, &r);
            if rho_next == 0.0 || omega == 0.0 {
                if restarts_left > 0 {
                    restarts_left -= 1;
                    continue 'outer;
                }
                breakdown = true;
                break 'outer;
            }
            let beta = (rho_next / rho) * (alpha / omega);
            rho = rho_next;
            for i in 0..n {
                p[i] = r[i] + beta * (p[i] - omega * v[i]);
            }
            apply_precond(&p, &mut phat);
            op.apply(&phat, &mut v);
            let r0v = dot(&r0, &v);
            if r0v == 0.0 {
                if restarts_left > 0 {
                    restarts_left -= 1;
                    continue 'outer;
                }
                breakdown = true;
                break 'outer;
            }
            alpha = rho / r0v;
            // s = r - alpha v
            for i in 0..n {
                r[i] -= alpha * v[i];
            }
            if norm(&r) <= target {
                for i in 0..n {
                    x[i] += alpha * phat[i];
                }
                break 'outer;
            }
            apply_precond(&r, &mut shat);
            op.apply(&shat, &mut t);
            let tt = dot(&t, &t);
            omega = if tt != 0.0 { dot(&t, &r) / tt } else { 0.0 };
            for i in 0..n {
                x[i] += alpha * phat[i] + omega * shat[i];
            }
            for i in 0..n {
                r[i] -= omega * t[i];
            }
            if norm(&r) <= target {
                break 'outer;
            }
        }
        if iterations >= cfg.max_iter {
            break;
        }
    }

    // true residual, recomputed
    let mut rr = vec![0.0; n];
    op.apply(&x, &mut rr);
    for i in 0..n {
        rr[i] = b[i] - rr[i];
    }
    let final_residual = norm(&rr);
    let report = SolveReport {
        iterations,
        final_residual,
        converged: final_residual <= target && !breakdown,
        breakdown,
    };
    (x, report)
}
