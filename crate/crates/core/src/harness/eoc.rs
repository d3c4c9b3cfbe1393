//! Grid convergence study: errors between successive grid doublings and the
//! observed convergence order.

use crate::error::{Error, Result};
use crate::harness::config::ExperimentConfig;
use crate::harness::run::run_simulation;
use crate::model::StateField;
use std::io::Write;
use std::path::Path;

/// 2x2 block average of a field on a 2n x 2n grid down to n x n. Preserves
/// total mass: sum coarse * (2h)^2 = sum fine * h^2.
pub fn restrict(fine: &[f64], n_fine: usize) -> Result<Vec<f64>> {
    if n_fine % 2 != 0 || fine.len() != n_fine * n_fine {
        return Err(Error::Config(format!(
            "restriction needs an even square grid, got n = {n_fine}, len = {}",
            fine.len()
        )));
    }
    let n = n_fine / 2;
    let mut coarse = vec![0.0; n * n];
    for j in 0..n {
        for i in 0..n {
            let (fi, fj) = (2 * i, 2 * j);
            let s = fine[fi + fj * n_fine]
                + fine[fi + 1 + fj * n_fine]
                + fine[fi + (fj + 1) * n_fine]
                + fine[fi + 1 + (fj + 1) * n_fine];
            coarse[i + j * n] = 0.25 * s;
        }
    }
    Ok(coarse)
}

pub fn l1_norm(delta: &[f64], cell_area: f64) -> f64 {
    delta.iter().map(|d| d.abs()).sum::<f64>() * cell_area
}

pub fn l2_norm(delta: &[f64], cell_area: f64) -> f64 {
    (delta.iter().map(|d| d * d).sum::<f64>() * cell_area).sqrt()
}

/// Errors of one adjacent grid pair, per component and norm.
#[derive(Debug, Clone)]
pub struct PairErrors {
    pub n_coarse: usize,
    pub n_fine: usize,
    /// Indexed [component][norm] with components c1, c2, kappa and norms L1, L2.
    pub errors: [[f64; 2]; 3],
}

pub const EOC_COMPONENTS: [&str; 3] = ["c1", "c2", "kappa"];
pub const EOC_NORMS: [&str; 2] = ["L1", "L2"];

#[derive(Debug, Clone)]
pub struct EocLevel {
    pub n: usize,
    pub wall_seconds: f64,
    pub steps: usize,
}

#[derive(Debug, Clone)]
pub struct EocStudy {
    pub levels: Vec<EocLevel>,
    pub pairs: Vec<PairErrors>,
    /// eoc[p][component][norm] = log2(pairs[p] / pairs[p+1]); NaN when either
    /// error vanishes.
    pub eoc: Vec<[[f64; 2]; 3]>,
}

fn pair_errors(
    coarse: &StateField,
    fine: &StateField,
    n_coarse: usize,
    extent: f64,
) -> Result<PairErrors> {
    let n_fine = 2 * n_coarse;
    let h = extent / n_coarse as f64;
    let area = h * h;
    let mut errors = [[0.0; 2]; 3];
    for (ci, field) in [(&coarse.c1, &fine.c1), (&coarse.c2, &fine.c2), (&coarse.kappa, &fine.kappa)]
        .into_iter()
        .enumerate()
    {
        let restricted = restrict(field.1, n_fine)?;
        let delta: Vec<f64> = field.0.iter().zip(&restricted).map(|(a, b)| a - b).collect();
        errors[ci][0] = l1_norm(&delta, area);
        errors[ci][1] = l2_norm(&delta, area);
    }
    Ok(PairErrors {
        n_coarse,
        n_fine,
        errors,
    })
}

pub fn eoc_from_errors(e_coarse: f64, e_fine: f64) -> f64 {
    if e_coarse <= 0.0 || e_fine <= 0.0 {
        f64::NAN
    } else {
        (e_coarse / e_fine).log2()
    }
}

/// Runs the configured experiment on each level and forms pairwise errors.
/// Levels must be strictly doubling (25, 50, 100, ...).
pub fn eoc_study(cfg: &ExperimentConfig, levels: &[usize]) -> Result<EocStudy> {
    if levels.len() < 2 {
        return Err(Error::Config("eoc needs at least two grid levels".into()));
    }
    for w in levels.windows(2) {
        if w[1] != 2 * w[0] {
            return Err(Error::Config(format!(
                "eoc levels must double: {} does not follow {}",
                w[1], w[0]
            )));
        }
    }
    let mut states: Vec<StateField> = Vec::with_capacity(levels.len());
    let mut level_info = Vec::with_capacity(levels.len());
    for &n in levels {
        let mut level_cfg = cfg.clone().with_grid_size(n)?;
        level_cfg.snapshot_times = vec![level_cfg.t_final];
        level_cfg.out_dir = None;
        let art = run_simulation(&level_cfg)?;
        level_info.push(EocLevel {
            n,
            wall_seconds: art.report.wall_seconds,
            steps: art.report.steps.len(),
        });
        states.push(art.final_state);
    }
    let mut pairs = Vec::with_capacity(levels.len() - 1);
    for i in 0..levels.len() - 1 {
        pairs.push(pair_errors(
            &states[i],
            &states[i + 1],
            levels[i],
            cfg.grid.b - cfg.grid.a,
        )?);
    }
    let mut eoc = Vec::new();
    for p in 0..pairs.len().saturating_sub(1) {
        let mut block = [[0.0; 2]; 3];
        for c in 0..3 {
            for nrm in 0..2 {
                block[c][nrm] = eoc_from_errors(pairs[p].errors[c][nrm], pairs[p + 1].errors[c][nrm]);
            }
        }
        eoc.push(block);
    }
    Ok(EocStudy {
        levels: level_info,
        pairs,
        eoc,
    })
}

impl EocStudy {
    /// `pair,component,norm,error,eoc` rows; the first pair has no order.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(f, "pair,component,norm,error,eoc")?;
        for (p, pair) in self.pairs.iter().enumerate() {
            for (c, comp) in EOC_COMPONENTS.iter().enumerate() {
                for (nrm, norm) in EOC_NORMS.iter().enumerate() {
                    let order = if p == 0 {
                        String::new()
                    } else {
                        let v = self.eoc[p - 1][c][nrm];
                        if v.is_nan() {
                            "undefined".to_string()
                        } else {
                            format!("{v:.4}")
                        }
                    };
                    writeln!(
                        f,
                        "{}x{}/{}x{},{comp},{norm},{:.6e},{order}",
                        pair.n_coarse, pair.n_coarse, pair.n_fine, pair.n_fine,
                        pair.errors[c][nrm]
                    )?;
                }
            }
        }
        Ok(())
    }

    pub fn write_timing_csv(&self, path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(f, "n,cells,steps,wall_seconds")?;
        for l in &self.levels {
            writeln!(f, "{},{},{},{:.6}", l.n, l.n * l.n, l.steps, l.wall_seconds)?;
        }
        Ok(())
    }
}
