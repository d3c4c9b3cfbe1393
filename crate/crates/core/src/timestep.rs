//! Adaptive time increment from the CFL bound on the haptotaxis speeds and
//! the contractivity relative-change bound, both evaluated on first-stage
//! data.

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::spatial::FluxWorkspace;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepControlConfig {
    pub cfl_limit: f64,
    pub kappa_rel_limit: f64,
    pub dt_max: f64,
    pub dt_min: f64,
}

impl StepControlConfig {
    /// Defaults tied to the simulated horizon: dt_max caps the step when all
    /// speeds and the kappa forcing vanish.
    pub fn for_final_time(t_final: f64) -> Self {
        StepControlConfig {
            cfl_limit: 0.5,
            kappa_rel_limit: 0.01,
            dt_max: 1e-2 * t_final,
            dt_min: 1e-12,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cfl_limit > 0.0 && self.cfl_limit <= 1.0) {
            return Err(Error::Config(format!(
                "cfl_limit must lie in (0,1], got {}",
                self.cfl_limit
            )));
        }
        if !(self.kappa_rel_limit > 0.0) {
            return Err(Error::Config("kappa_rel_limit must be > 0".into()));
        }
        if !(self.dt_min > 0.0 && self.dt_min < self.dt_max) {
            return Err(Error::Config(format!(
                "need 0 < dt_min < dt_max, got {} and {}",
                self.dt_min, self.dt_max
            )));
        }
        Ok(())
    }
}

/// Which bound produced the accepted time increment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DtBound {
    Cfl,
    KappaChange,
    DtMax,
    /// Shrunk to land exactly on a requested output time.
    OutputLanding,
}

impl DtBound {
    pub fn as_str(&self) -> &'static str {
        match self {
            DtBound::Cfl => "cfl",
            DtBound::KappaChange => "kappa",
            DtBound::DtMax => "dt_max",
            DtBound::OutputLanding => "output",
        }
    }
}

/// Maximum |P|/h over all interior faces. Absolute values keep the bound
/// meaningful for leftward transport.
pub fn max_speed(grid: &GridSpec, ws: &FluxWorkspace) -> f64 {
    let mut a: f64 = 0.0;
    for &p in &ws.speeds_x {
        a = a.max(p.abs() / grid.h1);
    }
    for &p in &ws.speeds_y {
        a = a.max(p.abs() / grid.h2);
    }
    a
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, &x| m.max(x.abs()))
}

/// Time increment from the CFL and kappa-change bounds. `r5_expl` is the
/// kappa component of the explicit reaction at the first stage. Each guard is
/// skipped when its denominator vanishes.
pub fn compute_dt(
    a: f64,
    kappa_n: &[f64],
    r5_expl: &[f64],
    cfg: &StepControlConfig,
) -> Result<(f64, DtBound)> {
    let mut dt = cfg.dt_max;
    let mut bound = DtBound::DtMax;
    if a > 0.0 {
        let dt_cfl = cfg.cfl_limit / a;
        if dt_cfl < dt {
            dt = dt_cfl;
            bound = DtBound::Cfl;
        }
    }
    let kappa_norm = inf_norm(kappa_n);
    let r5_norm = inf_norm(r5_expl);
    if r5_norm > 0.0 && kappa_norm > 0.0 {
        let dt_kappa = cfg.kappa_rel_limit * kappa_norm / r5_norm;
        if dt_kappa < dt {
            dt = dt_kappa;
            bound = DtBound::KappaChange;
        }
    }
    if dt < cfg.dt_min {
        return Err(Error::StepSizeCollapse(cfg.dt_min));
    }
    Ok((dt, bound))
}
