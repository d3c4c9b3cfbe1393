//! Run artifacts on disk: binary field snapshots, CSV exports, run reports.
//!
//! Snapshot layout (little endian): magic `FVSN`, version u32, nx u32,
//! ny u32, a f64, b f64, t f64, then nx*ny row-major f64 values. One file per
//! time per component.

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::model::StateField;
use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

const MAGIC: &[u8; 4] = b"FVSN";
const VERSION: u32 = 1;

pub const COMPONENTS: [&str; 5] = ["c1", "c2", "v", "y", "kappa"];

#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotHeader {
    pub nx: u32,
    pub ny: u32,
    pub a: f64,
    pub b: f64,
    pub t: f64,
}

pub fn write_snapshot(path: &Path, grid: &GridSpec, t: f64, data: &[f64]) -> Result<()> {
    assert_eq!(data.len(), grid.n_cells);
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(MAGIC)?;
    w.write_u32::<LittleEndian>(VERSION)?;
    w.write_u32::<LittleEndian>(grid.nx as u32)?;
    w.write_u32::<LittleEndian>(grid.ny as u32)?;
    w.write_f64::<LittleEndian>(grid.a)?;
    w.write_f64::<LittleEndian>(grid.b)?;
    w.write_f64::<LittleEndian>(t)?;
    for &x in data {
        w.write_f64::<LittleEndian>(x)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_snapshot(path: &Path) -> Result<(SnapshotHeader, Vec<f64>)> {
    let mut r = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::SnapshotFormat(format!(
            "{}: bad magic {magic:?}",
            path.display()
        )));
    }
    let version = r.read_u32::<LittleEndian>()?;
    if version != VERSION {
        return Err(Error::SnapshotFormat(format!(
            "{}: unsupported version {version}",
            path.display()
        )));
    }
    let header = SnapshotHeader {
        nx: r.read_u32::<LittleEndian>()?,
        ny: r.read_u32::<LittleEndian>()?,
        a: r.read_f64::<LittleEndian>()?,
        b: r.read_f64::<LittleEndian>()?,
        t: r.read_f64::<LittleEndian>()?,
    };
    let n = header.nx as usize * header.ny as usize;
    let mut data = vec![0.0; n];
    for x in &mut data {
        *x = r.read_f64::<LittleEndian>()?;
    }
    let mut rest = Vec::new();
    r.read_to_end(&mut rest)?;
    if !rest.is_empty() {
        return Err(Error::SnapshotFormat(format!(
            "{}: {} trailing bytes",
            path.display(),
            rest.len()
        )));
    }
    Ok((header, data))
}

pub fn snapshot_file_name(index: usize, component: &str) -> String {
    format!("snapshot_{index:04}_{component}.bin")
}

/// Write all five components of a state plus optional CSV exports; records
/// (index, time) in the caller-maintained snapshot listing.
pub fn write_state_snapshot(
    dir: &Path,
    index: usize,
    grid: &GridSpec,
    t: f64,
    w: &StateField,
    csv_export: bool,
) -> Result<()> {
    for (name, data) in COMPONENTS.iter().zip(w.components()) {
        let path = dir.join(snapshot_file_name(index, name));
        write_snapshot(&path, grid, t, data)?;
        if csv_export {
            write_field_csv(&dir.join(format!("snapshot_{index:04}_{name}.csv")), grid, data)?;
        }
    }
    write_radial_cut(&dir.join(format!("cut_{index:04}.csv")), grid, w)?;
    Ok(())
}

pub fn read_state_snapshot(dir: &Path, index: usize) -> Result<(SnapshotHeader, StateField)> {
    let mut fields: Vec<Vec<f64>> = Vec::with_capacity(5);
    let mut header = None;
    for name in COMPONENTS {
        let (h, data) = read_snapshot(&dir.join(snapshot_file_name(index, name)))?;
        if let Some(prev) = &header {
            if *prev != h {
                return Err(Error::SnapshotFormat(format!(
                    "inconsistent headers in snapshot {index}"
                )));
            }
        }
        header = Some(h);
        fields.push(data);
    }
    let kappa = fields.pop().unwrap();
    let y = fields.pop().unwrap();
    let v = fields.pop().unwrap();
    let c2 = fields.pop().unwrap();
    let c1 = fields.pop().unwrap();
    Ok((header.unwrap(), StateField { c1, c2, v, y, kappa }))
}

/// Listing of emitted snapshots: `index,time` rows.
pub fn write_snapshot_listing(dir: &Path, times: &[f64]) -> Result<()> {
    let mut f = BufWriter::new(File::create(dir.join("snapshots.csv"))?);
    writeln!(f, "index,time")?;
    for (i, t) in times.iter().enumerate() {
        writeln!(f, "{i},{t:.17e}")?;
    }
    Ok(())
}

pub fn read_snapshot_listing(dir: &Path) -> Result<Vec<(usize, f64)>> {
    let text = std::fs::read_to_string(dir.join("snapshots.csv"))?;
    let mut out = Vec::new();
    for line in text.lines().skip(1) {
        let mut parts = line.split(',');
        let idx = parts
            .next()
            .and_then(|s| s.parse::<usize>().ok())
            .ok_or_else(|| Error::SnapshotFormat(format!("bad listing line: {line}")))?;
        let t = parts
            .next()
            .and_then(|s| s.parse::<f64>().ok())
            .ok_or_else(|| Error::SnapshotFormat(format!("bad listing line: {line}")))?;
        out.push((idx, t));
    }
    Ok(out)
}

/// Plain grid dump for plotting: x1,x2,value.
pub fn write_field_csv(path: &Path, grid: &GridSpec, data: &[f64]) -> Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    writeln!(f, "x1,x2,value")?;
    for k in 0..grid.n_cells {
        let (x, y) = grid.cell_center(k + 1)?;
        writeln!(f, "{x:.17e},{y:.17e},{:.17e}", data[k])?;
    }
    Ok(())
}

/// Radial cut along the positive x1 semi-axis through the center row.
pub fn write_radial_cut(path: &Path, grid: &GridSpec, w: &StateField) -> Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    writeln!(f, "r,c1,c2,v,y,kappa")?;
    for (r, cell) in radial_cut(grid, w) {
        writeln!(
            f,
            "{r:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
            cell[0], cell[1], cell[2], cell[3], cell[4]
        )?;
    }
    Ok(())
}

/// Cells of the center row from the domain midpoint to the right edge, with
/// their radius (x1 coordinate of the cell center).
pub fn radial_cut(grid: &GridSpec, w: &StateField) -> Vec<(f64, [f64; 5])> {
    let j = (grid.ny + 1) / 2 - 1; // 0-based center row
    let mut out = Vec::new();
    for i in grid.nx / 2..grid.nx {
        let k = i + j * grid.nx;
        let (x, _) = grid.cell_center(k + 1).expect("in range");
        out.push((x, w.cell(k)));
    }
    out
}

/// Per-step run report rows.
pub struct ReportWriter {
    file: BufWriter<File>,
}

impl ReportWriter {
    pub fn create(dir: &Path) -> Result<Self> {
        let mut file = BufWriter::new(File::create(dir.join("report.csv"))?);
        writeln!(file, "step,t,dt,active_bound,krylov_iterations,linear_solves")?;
        Ok(ReportWriter { file })
    }

    pub fn record(
        &mut self,
        step: usize,
        t: f64,
        dt: f64,
        bound: &str,
        krylov_iterations: usize,
        linear_solves: usize,
    ) -> Result<()> {
        writeln!(
            self.file,
            "{step},{t:.17e},{dt:.17e},{bound},{krylov_iterations},{linear_solves}"
        )?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        self.file.flush()?;
        Ok(())
    }
}

pub fn ensure_dir(dir: &Path) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    Ok(dir.to_path_buf())
}
