//! Front diagnostics of the migrating component, the delay sweep built on
//! them, and run-to-run difference reports.

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::harness::config::ExperimentConfig;
use crate::harness::io::{self, radial_cut};
use crate::harness::run::run_simulation;
use crate::model::StateField;
use std::io::Write;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontMetrics {
    /// Radius of the outermost steep gradient of c2 on the positive x1
    /// semi-axis; 0 for flat profiles.
    pub front_position: f64,
    /// c2 at the outermost local maximum of the radial cut.
    pub front_height: f64,
    pub mass_c1: f64,
    pub mass_c2: f64,
}

/// Front detection on the radial cut: the front sits at the largest radius
/// where the one-sided gradient magnitude exceeds `threshold` times its
/// maximum; the height is read at the outermost local maximum.
pub fn front_metrics(grid: &GridSpec, w: &StateField, threshold: f64) -> FrontMetrics {
    let area = grid.cell_area();
    let mass_c1 = w.c1.iter().sum::<f64>() * area;
    let mass_c2 = w.c2.iter().sum::<f64>() * area;

    let cut = radial_cut(grid, w);
    let c2: Vec<f64> = cut.iter().map(|(_, cell)| cell[1]).collect();
    let r: Vec<f64> = cut.iter().map(|(r, _)| *r).collect();
    let m = c2.len();

    // one-sided (forward) gradient on the cut
    let mut grad = vec![0.0; m.saturating_sub(1)];
    for i in 0..grad.len() {
        grad[i] = (c2[i + 1] - c2[i]) / (r[i + 1] - r[i]);
    }
    let gmax = grad.iter().fold(0.0f64, |a, &g| a.max(g.abs()));
    let mut front_position = 0.0;
    if gmax > 0.0 {
        let thr = threshold * gmax;
        let face_r = |i: usize| 0.5 * (r[i] + r[i + 1]);
        for i in (0..grad.len()).rev() {
            if grad[i].abs() > thr {
                front_position = if i + 1 < grad.len() {
                    // sub-cell position: where the gradient magnitude falls
                    // through the threshold between this face and the next
                    let g0 = grad[i].abs();
                    let g1 = grad[i + 1].abs();
                    let theta = ((g0 - thr) / (g0 - g1)).clamp(0.0, 1.0);
                    face_r(i) + theta * (face_r(i + 1) - face_r(i))
                } else {
                    face_r(i)
                };
                break;
            }
        }
    }

    // outermost interior local maximum; a flat profile reports the center
    let mut front_height = c2.first().copied().unwrap_or(0.0);
    for i in (1..m.saturating_sub(1)).rev() {
        if c2[i] >= c2[i - 1] && c2[i] >= c2[i + 1] && c2[i] > c2[i + 1] {
            front_height = c2[i];
            break;
        }
    }

    FrontMetrics {
        front_position,
        front_height,
        mass_c1,
        mass_c2,
    }
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub tau: f64,
    pub metrics: Option<FrontMetrics>,
    pub error: Option<String>,
}

/// One run per delay value; failed runs keep their row and the sweep goes on.
pub fn sweep_tau(cfg: &ExperimentConfig, taus: &[f64]) -> Result<Vec<SweepRow>> {
    if taus.is_empty() {
        return Err(Error::Config("tau sweep needs at least one value".into()));
    }
    let mut rows = Vec::with_capacity(taus.len());
    for &tau in taus {
        let mut run_cfg = cfg.clone();
        run_cfg.params.tau = tau;
        run_cfg.out_dir = None;
        run_cfg.snapshot_times = vec![run_cfg.t_final];
        let row = match run_simulation(&run_cfg) {
            Ok(art) => SweepRow {
                tau,
                metrics: Some(front_metrics(
                    &art.grid,
                    &art.final_state,
                    cfg.front_threshold,
                )),
                error: None,
            },
            Err(e) => SweepRow {
                tau,
                metrics: None,
                error: Some(e.to_string()),
            },
        };
        rows.push(row);
    }
    Ok(rows)
}

pub fn write_sweep_csv(path: &Path, rows: &[SweepRow]) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "tau,front_position,front_height,mass_c1,mass_c2,status")?;
    for row in rows {
        match (&row.metrics, &row.error) {
            (Some(m), _) => writeln!(
                f,
                "{},{:.10e},{:.10e},{:.10e},{:.10e},ok",
                row.tau, m.front_position, m.front_height, m.mass_c1, m.mass_c2
            )?,
            (None, Some(e)) => writeln!(f, "{},,,,,failed: {}", row.tau, e.replace(',', ";"))?,
            (None, None) => unreachable!(),
        }
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct ComponentDiff {
    pub component: &'static str,
    pub linf: f64,
    pub l1: f64,
}

#[derive(Debug, Clone)]
pub struct SnapshotDiff {
    pub time: f64,
    pub components: Vec<ComponentDiff>,
}

/// Componentwise difference norms of two runs at matched snapshot times.
/// Both runs must share the grid and the snapshot schedule.
pub fn compare_runs(dir_a: &Path, dir_b: &Path) -> Result<Vec<SnapshotDiff>> {
    let list_a = io::read_snapshot_listing(dir_a)?;
    let list_b = io::read_snapshot_listing(dir_b)?;
    if list_a.len() != list_b.len() {
        return Err(Error::Config(format!(
            "snapshot counts differ: {} vs {}",
            list_a.len(),
            list_b.len()
        )));
    }
    let mut out = Vec::with_capacity(list_a.len());
    for ((ia, ta), (ib, tb)) in list_a.iter().zip(&list_b) {
        if (ta - tb).abs() > 1e-12 * ta.abs().max(1.0) {
            return Err(Error::Config(format!(
                "snapshot times differ: {ta} vs {tb}"
            )));
        }
        let (ha, wa) = io::read_state_snapshot(dir_a, *ia)?;
        let (hb, wb) = io::read_state_snapshot(dir_b, *ib)?;
        if (ha.nx, ha.ny, ha.a, ha.b) != (hb.nx, hb.ny, hb.a, hb.b) {
            return Err(Error::Config("grids differ between runs".into()));
        }
        let area = {
            let h = (ha.b - ha.a) / ha.nx as f64;
            let h2 = (ha.b - ha.a) / ha.ny as f64;
            h * h2
        };
        let mut components = Vec::with_capacity(5);
        for (name, (fa, fb)) in io::COMPONENTS
            .iter()
            .zip(wa.components().into_iter().zip(wb.components()))
        {
            let mut linf = 0.0f64;
            let mut l1 = 0.0f64;
            for (a, b) in fa.iter().zip(fb) {
                let d = (a - b).abs();
                linf = linf.max(d);
                l1 += d;
            }
            components.push(ComponentDiff {
                component: name,
                linf,
                l1: l1 * area,
            });
        }
        out.push(SnapshotDiff {
            time: *ta,
            components,
        });
    }
    Ok(out)
}
