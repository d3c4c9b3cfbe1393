//! Initial conditions of the two experiments.

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::model::StateField;
use statrs::function::gamma::gamma;

/// Density of the gamma distribution with shape `a` and scale `b`.
pub fn gamma_pdf(x: f64, a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0) || !(b > 0.0) {
        return Err(Error::Config(format!(
            "gamma density needs shape > 0 and scale > 0, got a={a}, b={b}"
        )));
    }
    if x < 0.0 {
        return Err(Error::Config(format!("gamma density needs x >= 0, got {x}")));
    }
    if x == 0.0 {
        // x^(a-1) at zero: 0 for a > 1, 1 for a = 1
        return if a > 1.0 {
            Ok(0.0)
        } else if a == 1.0 {
            Ok(1.0 / b)
        } else {
            Err(Error::Config(format!(
                "gamma density diverges at x = 0 for shape a = {a} < 1"
            )))
        };
    }
    Ok(x.powf(a - 1.0) * (-x / b).exp() / (b.powf(a) * gamma(a)))
}

fn init_common(grid: &GridSpec, epsilon: f64, y_of_r2: impl Fn(f64) -> Result<f64>) -> Result<StateField> {
    let mut w = StateField::zeros(grid.n_cells);
    for k in 0..grid.n_cells {
        let (x, y) = grid.cell_center(k + 1)?;
        let r2 = x * x + y * y;
        let bump = (-r2 / epsilon).exp();
        w.c1[k] = 0.4 * bump;
        w.c2[k] = bump;
        w.v[k] = 1.0 - bump;
        w.y[k] = y_of_r2(r2)?;
        w.kappa[k] = 2.0 * w.y[k];
    }
    Ok(w)
}

/// Convergence-study initial data: y = 20 f_gamma(5 r^2, 2, 15).
pub fn init_experiment0(grid: &GridSpec, epsilon: f64) -> Result<StateField> {
    init_common(grid, epsilon, |r2| Ok(20.0 * gamma_pdf(5.0 * r2, 2.0, 15.0)?))
}

/// Delay-study initial data: y = 15 f_gamma(80 r, 3, 7).
pub fn init_experiment1(grid: &GridSpec, epsilon: f64) -> Result<StateField> {
    init_common(grid, epsilon, |r2| {
        Ok(15.0 * gamma_pdf(80.0 * r2.sqrt(), 3.0, 7.0)?)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_pdf_values() {
        assert_eq!(gamma_pdf(0.0, 2.0, 15.0).unwrap(), 0.0);
        assert_eq!(gamma_pdf(0.0, 1.0, 1.0).unwrap(), 1.0);
        let v = gamma_pdf(15.0, 2.0, 15.0).unwrap();
        assert!((v - (-1.0f64).exp() / 15.0).abs() < 1e-12);
        assert!(gamma_pdf(1.0, -1.0, 1.0).is_err());
        assert!(gamma_pdf(-1.0, 2.0, 1.0).is_err());
    }

    #[test]
    fn experiment0_fields_near_origin() {
        let grid = GridSpec::square(-2.0, 2.0, 100).unwrap();
        let w = init_experiment0(&grid, 1.5).unwrap();
        // cell nearest the origin
        let k = grid
            .n_cells
            .min(49 + 49 * 100); // (i,j) = (50,50), 0-based (49,49)
        assert!((w.c2[k] - 1.0).abs() < 2e-3);
        assert!((w.c1[k] - 0.4).abs() < 1e-3);
        assert!(w.v[k].abs() < 2e-3);
        assert!(w.y[k] < 0.01);
        for i in 0..grid.n_cells {
            assert_eq!(w.kappa[i], 2.0 * w.y[i]);
        }
    }

    #[test]
    fn experiment0_c2_mass_matches_gaussian_integral() {
        let grid = GridSpec::square(-2.0, 2.0, 100).unwrap();
        let w = init_experiment0(&grid, 1.5).unwrap();
        let mass: f64 = w.c2.iter().sum::<f64>() * grid.cell_area();
        // integral of exp(-r^2/eps) over the square [-2,2]^2
        let eps: f64 = 1.5;
        let one_d = (std::f64::consts::PI * eps).sqrt()
            * statrs::function::erf::erf(2.0 / eps.sqrt());
        let exact = one_d * one_d;
        assert!(
            (mass - exact).abs() / exact < 0.01,
            "mass = {mass}, expected about {exact}"
        );
    }

    #[test]
    fn experiment1_fields() {
        let grid = GridSpec::square(-2.0, 2.0, 100).unwrap();
        let w = init_experiment1(&grid, 1.5).unwrap();
        let k = 49 + 49 * 100;
        assert!((w.c2[k] - 1.0).abs() < 2e-3);
        assert!(w.v[k].abs() < 2e-3);
        assert!(w.y[k] < 0.2);
        for i in 0..grid.n_cells {
            assert_eq!(w.kappa[i], 2.0 * w.y[i]);
        }
    }
}
