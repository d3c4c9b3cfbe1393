//! Additive implicit-explicit Runge-Kutta stepper.
//!
//! Advection and the nonstiff reactions advance explicitly, diffusion and the
//! integrin kinetics implicitly. The implicit stage system decouples: c2
//! needs a sparse Krylov solve, y is diagonal and solved in closed form per
//! cell, and c1, v, kappa carry no implicit terms. The diffusion coefficient
//! depends on the stage's own c2; by default the stage is converged by fixed
//! point iteration on that coefficient, with single-solve coefficient
//! freezing available as an option.

use crate::delay::DelayBuffer;
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::krylov::{bicgstab, FnOperator, SolveReport, SolverConfig};
use crate::model::{reaction_expl, reaction_impl, ModelParams, Rates, StateField};
use crate::spatial::{DiffusionStencil, FluxWorkspace};
use crate::tableau::{ButcherPair, STAGES};
use crate::timestep::max_speed;
use serde::{Deserialize, Serialize};

/// Where the diffusion coefficient of the implicit c2 solve is taken from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FreezeMode {
    /// Single solve, coefficient frozen at the most recent stage.
    PrevStage,
    /// Single solve, coefficient frozen at the step start.
    StepStart,
    /// Iterate the coefficient to a fixed point (restores the design order).
    Picard,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub solver: SolverConfig,
    pub freeze: FreezeMode,
    pub picard_tol: f64,
    pub picard_max_iter: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            solver: SolverConfig::default(),
            freeze: FreezeMode::Picard,
            picard_tol: 1e-12,
            picard_max_iter: 12,
        }
    }
}

/// Per-step solver statistics.
#[derive(Debug, Clone, Copy, Default)]
pub struct StepStats {
    pub krylov_iterations: usize,
    pub linear_solves: usize,
    pub picard_iterations: usize,
}

/// First-stage explicit operator evaluation, reused by the time step
/// controller.
pub struct ExplicitEval {
    pub rates: Rates,
    pub max_speed: f64,
}

pub struct Integrator<'a> {
    pub grid: &'a GridSpec,
    pub params: &'a ModelParams,
    pub tableau: ButcherPair,
    pub cfg: IntegratorConfig,
}

impl<'a> Integrator<'a> {
    pub fn new(grid: &'a GridSpec, params: &'a ModelParams, cfg: IntegratorConfig) -> Self {
        let tableau = ButcherPair::imex3();
        tableau.verify().expect("built-in tableau is consistent");
        Integrator {
            grid,
            params,
            tableau,
            cfg,
        }
    }

    /// Explicit operator -A + R_expl at stage time `t_hat`; the state's own
    /// integrin field stands in for y at `t_hat` in the delay interpolation.
    pub fn eval_explicit(
        &self,
        w: &StateField,
        t_hat: f64,
        buf: &DelayBuffer,
    ) -> Result<ExplicitEval> {
        let delay = self.params.delay();
        let y_delayed = buf.interpolate_delayed(t_hat, delay, &w.y)?;
        let ws = FluxWorkspace::compute(self.grid, self.params, w);
        let adv = ws.divergence(self.grid);
        let a = max_speed(self.grid, &ws);
        let n = self.grid.n_cells;
        let mut rates = Rates::zeros(n);
        for i in 0..n {
            let r = reaction_expl(self.params, w.cell(i), y_delayed[i]);
            rates.c1[i] = r[0];
            rates.c2[i] = r[1] - adv[i];
            rates.v[i] = r[2];
            rates.kappa[i] = r[4];
        }
        Ok(ExplicitEval {
            rates,
            max_speed: a,
        })
    }

    /// Implicit operator D + R_impl, evaluated directly (used for the first
    /// stage, which needs no solve).
    fn eval_implicit(&self, w: &StateField) -> Result<Rates> {
        let stencil = DiffusionStencil::from_state(self.grid, self.params, w)?;
        let n = self.grid.n_cells;
        let mut rates = Rates::zeros(n);
        stencil.apply(&w.c2, &mut rates.c2);
        for i in 0..n {
            rates.y[i] = reaction_impl(self.params, w.cell(i))[3];
        }
        Ok(rates)
    }

    /// One step from `t_n` to `t_n + dt`. `stage1` may carry the explicit
    /// evaluation at `w_n` already computed for the time step controller.
    pub fn step(
        &self,
        w_n: &StateField,
        t_n: f64,
        dt: f64,
        buf: &DelayBuffer,
        stage1: Option<&ExplicitEval>,
    ) -> Result<(StateField, StepStats)> {
        assert!(dt > 0.0);
        let tab = &self.tableau;
        let mut stats = StepStats::default();

        let mut k_expl: Vec<Rates> = Vec::with_capacity(STAGES);
        let mut k_impl: Vec<Rates> = Vec::with_capacity(STAGES);
        let mut stages: Vec<StateField> = Vec::with_capacity(STAGES);

        // stage 1: zero implicit diagonal, W_1 = w^n exactly
        stages.push(w_n.clone());
        match stage1 {
            Some(e) => k_expl.push(clone_rates(&e.rates)),
            None => k_expl.push(self.eval_explicit(w_n, t_n + tab.c_e[0] * dt, buf)?.rates),
        }
        k_impl.push(self.eval_implicit(w_n)?);

        for i in 1..STAGES {
            let mut rhs = w_n.clone();
            for j in 0..i {
                if tab.a_e[i][j] != 0.0 {
                    rhs.axpy(dt * tab.a_e[i][j], &k_expl[j]);
                }
                if tab.a_i[i][j] != 0.0 {
                    rhs.axpy(dt * tab.a_i[i][j], &k_impl[j]);
                }
            }
            let gamma_dt = tab.a_i[i][i] * dt;

            // c1, v, kappa have no implicit terms: the stage values equal the
            // rhs, so the solve coefficients below use them exactly.
            let mut frozen = rhs.clone();
            let mut c2_iter = match self.cfg.freeze {
                FreezeMode::StepStart => w_n.c2.clone(),
                _ => stages[i - 1].c2.clone(),
            };
            let mut y_stage = rhs.y.clone();
            let picard_rounds = if self.cfg.freeze == FreezeMode::Picard {
                self.cfg.picard_max_iter
            } else {
                1
            };
            for round in 0..picard_rounds {
                frozen.c2 = c2_iter.clone();
                let (c2_new, y_new, report) = stage_solve(
                    self.grid,
                    self.params,
                    &rhs.c2,
                    &rhs.y,
                    &frozen,
                    gamma_dt,
                    &self.cfg.solver,
                    &c2_iter,
                )?;
                stats.linear_solves += 1;
                stats.krylov_iterations += report.iterations;
                if !report.converged {
                    return Err(Error::SolverFailure {
                        iterations: report.iterations,
                        residual: report.final_residual,
                    });
                }
                let diff = c2_new
                    .iter()
                    .zip(&c2_iter)
                    .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
                let scale = c2_new.iter().fold(1.0f64, |m, &x| m.max(x.abs()));
                c2_iter = c2_new;
                y_stage = y_new;
                stats.picard_iterations += 1;
                if round + 1 == picard_rounds || diff <= self.cfg.picard_tol * scale {
                    break;
                }
            }

            let mut w_stage = rhs.clone();
            w_stage.c2 = c2_iter;
            w_stage.y = y_stage;

            // algebraic recovery of the implicit slope keeps the stage
            // equation and the final combination consistent
            let n = self.grid.n_cells;
            let mut ki = Rates::zeros(n);
            for c in 0..n {
                ki.c2[c] = (w_stage.c2[c] - rhs.c2[c]) / gamma_dt;
                ki.y[c] = (w_stage.y[c] - rhs.y[c]) / gamma_dt;
            }
            let ke = self.eval_explicit(&w_stage, t_n + tab.c_e[i] * dt, buf)?.rates;
            stages.push(w_stage);
            k_impl.push(ki);
            k_expl.push(ke);
        }

        let mut w_next = w_n.clone();
        for j in 0..STAGES {
            w_next.axpy(dt * tab.b_e[j], &k_expl[j]);
            w_next.axpy(dt * tab.b_i[j], &k_impl[j]);
        }
        if !w_next.all_finite() {
            return Err(Error::DegenerateState(
                "non-finite value after step".into(),
            ));
        }
        Ok((w_next, stats))
    }
}

fn clone_rates(r: &Rates) -> Rates {
    Rates {
        c1: r.c1.clone(),
        c2: r.c2.clone(),
        v: r.v.clone(),
        y: r.y.clone(),
        kappa: r.kappa.clone(),
    }
}

/// Linearized implicit stage solve.
///
/// c2 solves (I - gamma_dt L_T) c2 = rhs_c2 with the diffusion coefficient
/// frozen at `w_frozen`; y solves the per-cell linear integrin equation with
/// v frozen at `w_frozen`, in closed form. `x0` warm-starts the Krylov
/// iteration.
#[allow(clippy::too_many_arguments)]
pub fn stage_solve(
    grid: &GridSpec,
    params: &ModelParams,
    rhs_c2: &[f64],
    rhs_y: &[f64],
    w_frozen: &StateField,
    gamma_dt: f64,
    solver: &SolverConfig,
    x0: &[f64],
) -> Result<(Vec<f64>, Vec<f64>, SolveReport)> {
    assert!(gamma_dt >= 0.0);
    let n = grid.n_cells;
    let trivial = SolveReport {
        iterations: 0,
        final_residual: 0.0,
        converged: true,
        breakdown: false,
    };
    if gamma_dt == 0.0 {
        return Ok((rhs_c2.to_vec(), rhs_y.to_vec(), trivial));
    }

    // y: (1 + gamma_dt (k1 v + k-1)/chi) y = rhs_y + gamma_dt k1 v / chi
    let mut y = vec![0.0; n];
    for i in 0..n {
        let v = w_frozen.v[i];
        let denom = 1.0 + gamma_dt * (params.k_1 * v + params.k_m1) / params.chi;
        y[i] = (rhs_y[i] + gamma_dt * params.k_1 * v / params.chi) / denom;
    }

    let stencil = DiffusionStencil::from_state(grid, params, w_frozen)?;
    if stencil.diagonal().iter().all(|&d| d == 0.0) {
        // zero diffusion operator
        return Ok((rhs_c2.to_vec(), y, trivial));
    }
    let op = FnOperator {
        n,
        f: |x: &[f64], out: &mut [f64]| {
            stencil.apply(x, out);
            for i in 0..x.len() {
                out[i] = x[i] - gamma_dt * out[i];
            }
        },
    };
    let diag;
    let precond = if solver.jacobi {
        diag = stencil
            .diagonal()
            .iter()
            .map(|d| 1.0 - gamma_dt * d)
            .collect::<Vec<_>>();
        Some(diag.as_slice())
    } else {
        None
    };
    let (c2, report) = bicgstab(&op, rhs_c2, x0, solver, precond);
    Ok((c2, y, report))
}
