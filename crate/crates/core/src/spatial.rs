//! Semi-discrete spatial operators: central-upwind haptotaxis flux with
//! MC-limited reconstruction of c2, and the nonconstant-coefficient
//! diffusion stencil.
//!
//! Boundary closure mirrors the adjacent interior cell (ghost value equal to
//! the boundary cell value), which zeroes the interface speed and the
//! diffusive face flux and realizes the zero-flux boundary condition
//! discretely.

use crate::error::Result;
use crate::grid::GridSpec;
use crate::model::{diffusion_coefficient, ModelParams, Rates, StateField};

/// Three-argument minmod: min of all-positive, max of all-negative, else 0.
pub fn minmod(v1: f64, v2: f64, v3: f64) -> f64 {
    if v1 > 0.0 && v2 > 0.0 && v3 > 0.0 {
        v1.min(v2).min(v3)
    } else if v1 < 0.0 && v2 < 0.0 && v3 < 0.0 {
        v1.max(v2).max(v3)
    } else {
        0.0
    }
}

/// Monotonized-central limited interface increment.
pub fn mc_slope(c_minus: f64, c_center: f64, c_plus: f64) -> f64 {
    minmod(
        c_center - c_minus,
        0.25 * (c_plus - c_minus),
        c_plus - c_center,
    )
}

/// Local characteristic speed at an interface. `v` and `kappa` enter as cell
/// averages, no reconstruction.
pub fn local_speed(p: &ModelParams, w_left: [f64; 5], w_right: [f64; 5], h: f64) -> f64 {
    let [_, _, vl, _, kl] = w_left;
    let [_, _, vr, _, kr] = w_right;
    0.5 * p.d_h * (kl * vl / (1.0 + vl) + kr * vr / (1.0 + vr)) * (vr - vl) / h
}

/// Interface flux from the reconstructed c2 values: a nonnegative speed
/// selects the plus-side (right-cell) reconstruction, a negative speed the
/// minus-side one. This pairing sharpens advected profiles and is the one the
/// convergence and step-control results are calibrated against.
pub fn numerical_flux(speed: f64, c2_minus_recon: f64, c2_plus_recon: f64) -> f64 {
    if speed >= 0.0 {
        speed * c2_plus_recon
    } else {
        speed * c2_minus_recon
    }
}

/// Per-cell limited slopes and per-face speeds/fluxes of the haptotaxis term.
///
/// Face arrays include the domain boundary faces, which carry speed and flux
/// exactly zero. The x-face between columns i-1 and i of row j sits at index
/// `i + j*(nx+1)`; the y-face between rows j-1 and j of column i at
/// `i + j*nx`.
#[derive(Debug, Clone)]
pub struct FluxWorkspace {
    pub slopes_x: Vec<f64>,
    pub slopes_y: Vec<f64>,
    pub speeds_x: Vec<f64>,
    pub speeds_y: Vec<f64>,
    pub fluxes_x: Vec<f64>,
    pub fluxes_y: Vec<f64>,
}

impl FluxWorkspace {
    pub fn compute(grid: &GridSpec, p: &ModelParams, w: &StateField) -> Self {
        let (nx, ny) = (grid.nx, grid.ny);
        let n = grid.n_cells;
        let c2 = &w.c2;
        let mut slopes_x = vec![0.0; n];
        let mut slopes_y = vec![0.0; n];

        // Mirrored ghost values make the boundary-adjacent slope arguments
        // degenerate to zero on the ghost side, hence minmod returns 0 there
        // only when signs mix; compute with explicit mirrors.
        for j in 0..ny {
            for i in 0..nx {
                let k = i + j * nx;
                let cm = if i > 0 { c2[k - 1] } else { c2[k] };
                let cp = if i + 1 < nx { c2[k + 1] } else { c2[k] };
                slopes_x[k] = mc_slope(cm, c2[k], cp);
                let cm = if j > 0 { c2[k - nx] } else { c2[k] };
                let cp = if j + 1 < ny { c2[k + nx] } else { c2[k] };
                slopes_y[k] = mc_slope(cm, c2[k], cp);
            }
        }

        let mut speeds_x = vec![0.0; (nx + 1) * ny];
        let mut fluxes_x = vec![0.0; (nx + 1) * ny];
        for j in 0..ny {
            for i in 1..nx {
                let l = (i - 1) + j * nx;
                let r = i + j * nx;
                let speed = local_speed(p, w.cell(l), w.cell(r), grid.h1);
                let c2m = c2[l] + slopes_x[l];
                let c2p = c2[r] - slopes_x[r];
                let f = i + j * (nx + 1);
                speeds_x[f] = speed;
                fluxes_x[f] = numerical_flux(speed, c2m, c2p);
            }
        }

        let mut speeds_y = vec![0.0; nx * (ny + 1)];
        let mut fluxes_y = vec![0.0; nx * (ny + 1)];
        for j in 1..ny {
            for i in 0..nx {
                let l = i + (j - 1) * nx;
                let r = i + j * nx;
                let speed = local_speed(p, w.cell(l), w.cell(r), grid.h2);
                let c2m = c2[l] + slopes_y[l];
                let c2p = c2[r] - slopes_y[r];
                let f = i + j * nx;
                speeds_y[f] = speed;
                fluxes_y[f] = numerical_flux(speed, c2m, c2p);
            }
        }

        FluxWorkspace {
            slopes_x,
            slopes_y,
            speeds_x,
            speeds_y,
            fluxes_x,
            fluxes_y,
        }
    }

    /// Flux divergence per cell: the c2 component of the discrete advection
    /// operator A.
    pub fn divergence(&self, grid: &GridSpec) -> Vec<f64> {
        let (nx, ny) = (grid.nx, grid.ny);
        let mut out = vec![0.0; grid.n_cells];
        for j in 0..ny {
            for i in 0..nx {
                let k = i + j * nx;
                let fx = i + j * (nx + 1);
                let fy = i + j * nx;
                out[k] = (self.fluxes_x[fx + 1] - self.fluxes_x[fx]) / grid.h1
                    + (self.fluxes_y[fy + nx] - self.fluxes_y[fy]) / grid.h2;
            }
        }
        out
    }
}

/// Discrete advection operator A; only the c2 component is nonzero.
pub fn advection_apply(grid: &GridSpec, p: &ModelParams, w: &StateField) -> Rates {
    let ws = FluxWorkspace::compute(grid, p, w);
    let mut rates = Rates::zeros(grid.n_cells);
    rates.c2 = ws.divergence(grid);
    rates
}

/// Linear stencil of the variable-coefficient diffusion operator, with the
/// coefficient field frozen.
#[derive(Debug, Clone)]
pub struct DiffusionStencil {
    nx: usize,
    ny: usize,
    h1sq: f64,
    h2sq: f64,
    t_coef: Vec<f64>,
}

impl DiffusionStencil {
    /// Coefficients taken from `w_frozen` via the discrete diffusion
    /// coefficient.
    pub fn from_state(grid: &GridSpec, p: &ModelParams, w_frozen: &StateField) -> Result<Self> {
        let mut t_coef = vec![0.0; grid.n_cells];
        for i in 0..grid.n_cells {
            t_coef[i] = diffusion_coefficient(p, w_frozen.cell(i))?;
        }
        Ok(Self::from_coefficients(grid, t_coef))
    }

    pub fn from_coefficients(grid: &GridSpec, t_coef: Vec<f64>) -> Self {
        assert_eq!(t_coef.len(), grid.n_cells);
        DiffusionStencil {
            nx: grid.nx,
            ny: grid.ny,
            h1sq: grid.h1 * grid.h1,
            h2sq: grid.h2 * grid.h2,
            t_coef,
        }
    }

    pub fn n(&self) -> usize {
        self.t_coef.len()
    }

    /// out = L_T x, the stencil applied to a c2 array. Boundary faces carry
    /// zero flux.
    pub fn apply(&self, x: &[f64], out: &mut [f64]) {
        let (nx, ny) = (self.nx, self.ny);
        let t = &self.t_coef;
        for j in 0..ny {
            for i in 0..nx {
                let k = i + j * nx;
                let mut acc = 0.0;
                if i > 0 {
                    acc += (t[k - 1] + t[k]) / (2.0 * self.h1sq) * (x[k - 1] - x[k]);
                }
                if i + 1 < nx {
                    acc += (t[k] + t[k + 1]) / (2.0 * self.h1sq) * (x[k + 1] - x[k]);
                }
                if j > 0 {
                    acc += (t[k - nx] + t[k]) / (2.0 * self.h2sq) * (x[k - nx] - x[k]);
                }
                if j + 1 < ny {
                    acc += (t[k] + t[k + nx]) / (2.0 * self.h2sq) * (x[k + nx] - x[k]);
                }
                out[k] = acc;
            }
        }
    }

    /// Diagonal of the stencil, used for Jacobi preconditioning of the
    /// implicit stage systems.
    pub fn diagonal(&self) -> Vec<f64> {
        let (nx, ny) = (self.nx, self.ny);
        let t = &self.t_coef;
        let mut diag = vec![0.0; t.len()];
        for j in 0..ny {
            for i in 0..nx {
                let k = i + j * nx;
                let mut acc = 0.0;
                if i > 0 {
                    acc -= (t[k - 1] + t[k]) / (2.0 * self.h1sq);
                }
                if i + 1 < nx {
                    acc -= (t[k] + t[k + 1]) / (2.0 * self.h1sq);
                }
                if j > 0 {
                    acc -= (t[k - nx] + t[k]) / (2.0 * self.h2sq);
                }
                if j + 1 < ny {
                    acc -= (t[k] + t[k + nx]) / (2.0 * self.h2sq);
                }
                diag[k] = acc;
            }
        }
        diag
    }
}

/// Discrete diffusion operator D; only the c2 component is nonzero.
pub fn diffusion_apply(grid: &GridSpec, p: &ModelParams, w: &StateField) -> Result<Rates> {
    let stencil = DiffusionStencil::from_state(grid, p, w)?;
    let mut rates = Rates::zeros(grid.n_cells);
    stencil.apply(&w.c2, &mut rates.c2);
    Ok(rates)
}
