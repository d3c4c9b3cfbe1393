//! Time loop of a single simulation: adaptive stepping, output landing,
//! snapshot emission and per-step reporting.

use crate::delay::DelayBuffer;
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::harness::config::{ExperimentConfig, Preset};
use crate::harness::init::{init_experiment0, init_experiment1};
use crate::harness::io;
use crate::imex::{Integrator, StepStats};
use crate::model::StateField;
use crate::timestep::{compute_dt, DtBound};
use std::time::Instant;

#[derive(Debug, Clone)]
pub struct StepRecord {
    pub step: usize,
    /// Time at the start of the step.
    pub t: f64,
    pub dt: f64,
    pub bound: DtBound,
    pub stats: StepStats,
}

#[derive(Debug, Clone, Default)]
pub struct RunReport {
    pub steps: Vec<StepRecord>,
    pub retries: usize,
    pub krylov_iterations: usize,
    pub linear_solves: usize,
    pub wall_seconds: f64,
}

pub struct RunArtifacts {
    pub grid: GridSpec,
    /// Requested snapshot times with the states reached there.
    pub snapshots: Vec<(f64, StateField)>,
    pub final_state: StateField,
    pub report: RunReport,
}

pub fn initial_state(cfg: &ExperimentConfig) -> Result<StateField> {
    match cfg.preset {
        Preset::Exp0 => init_experiment0(&cfg.grid, cfg.epsilon),
        _ => init_experiment1(&cfg.grid, cfg.epsilon),
    }
}

/// Landing tolerance for output times, relative to the current time scale.
fn close_enough(t: f64, target: f64) -> bool {
    (t - target).abs() <= 1e-12 * target.abs().max(1.0)
}

pub fn run_simulation(cfg: &ExperimentConfig) -> Result<RunArtifacts> {
    cfg.validate()?;
    let started = Instant::now();
    let grid = cfg.grid.clone();
    let mut w = initial_state(cfg)?;
    let delay = cfg.params.delay();
    let mut buf = DelayBuffer::new(0.0, w.y.clone());
    let integ = Integrator::new(&grid, &cfg.params, cfg.integrator.clone());

    let mut targets: Vec<f64> = cfg.snapshot_times.clone();
    targets.sort_by(|a, b| a.partial_cmp(b).unwrap());
    targets.dedup();

    let mut snapshots: Vec<(f64, StateField)> = Vec::new();
    let mut next_target = 0usize;
    let mut t = 0.0;
    if next_target < targets.len() && close_enough(t, targets[next_target]) {
        snapshots.push((targets[next_target], w.clone()));
        next_target += 1;
    }

    let mut report = RunReport::default();
    let mut step_index = 0usize;
    while t < cfg.t_final && !close_enough(t, cfg.t_final) {
        let eval1 = integ.eval_explicit(&w, t, &buf)?;
        let (mut dt, mut bound) = compute_dt(
            eval1.max_speed,
            &w.kappa,
            &eval1.rates.kappa,
            &cfg.step_control,
        )?;
        // shrink only, to land on the next output time or the horizon
        let stop = if next_target < targets.len() {
            targets[next_target].min(cfg.t_final)
        } else {
            cfg.t_final
        };
        if t + dt > stop - 1e-14 * stop.abs().max(1.0) {
            dt = stop - t;
            bound = DtBound::OutputLanding;
        }
        if dt <= 0.0 {
            return Err(Error::StepSizeCollapse(cfg.step_control.dt_min));
        }

        // retry with a halved increment on solver or state failure
        let (w_next, stats) = loop {
            match integ.step(&w, t, dt, &buf, Some(&eval1)) {
                Ok(out) => break out,
                Err(Error::SolverFailure { .. }) | Err(Error::DegenerateState(_)) => {
                    dt *= 0.5;
                    report.retries += 1;
                    if dt < cfg.step_control.dt_min {
                        return Err(Error::StepSizeCollapse(cfg.step_control.dt_min));
                    }
                }
                Err(e) => return Err(e),
            }
        };
        report.steps.push(StepRecord {
            step: step_index,
            t,
            dt,
            bound,
            stats,
        });
        report.krylov_iterations += stats.krylov_iterations;
        report.linear_solves += stats.linear_solves;
        step_index += 1;

        let t_next = t + dt;
        buf.advance(t_next, w_next.y.clone(), delay);
        w = w_next;
        t = t_next;
        while next_target < targets.len() && close_enough(t, targets[next_target]) {
            snapshots.push((targets[next_target], w.clone()));
            next_target += 1;
        }
    }
    report.wall_seconds = started.elapsed().as_secs_f64();

    if let Some(dir) = &cfg.out_dir {
        io::ensure_dir(dir)?;
        for (i, (ts, state)) in snapshots.iter().enumerate() {
            io::write_state_snapshot(dir, i, &grid, *ts, state, cfg.csv_export)?;
        }
        io::write_snapshot_listing(dir, &snapshots.iter().map(|(t, _)| *t).collect::<Vec<_>>())?;
        let mut rw = io::ReportWriter::create(dir)?;
        for r in &report.steps {
            rw.record(
                r.step,
                r.t,
                r.dt,
                r.bound.as_str(),
                r.stats.krylov_iterations,
                r.stats.linear_solves,
            )?;
        }
        rw.finish()?;
    }

    Ok(RunArtifacts {
        grid,
        snapshots,
        final_state: w,
        report,
    })
}
