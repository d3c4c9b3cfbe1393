//! Butcher tableaux of the 4-stage, 3rd-order additive IMEX scheme.
//!
//! Entries are stored as exact integer rationals and converted to floating
//! point once at construction. The implicit part is an ESDIRK tableau with a
//! zero first diagonal entry; the weight row equals the last implicit row
//! (stiffly accurate).

use crate::error::{Error, Result};

pub const STAGES: usize = 4;

#[derive(Debug, Clone)]
pub struct ButcherPair {
    pub a_e: [[f64; STAGES]; STAGES],
    pub b_e: [f64; STAGES],
    pub c_e: [f64; STAGES],
    pub a_i: [[f64; STAGES]; STAGES],
    pub b_i: [f64; STAGES],
    pub c_i: [f64; STAGES],
}

fn r(num: i64, den: i64) -> f64 {
    num as f64 / den as f64
}

impl ButcherPair {
    /// The additive 3rd-order, 4-stage pair used throughout.
    pub fn imex3() -> Self {
        let gamma = r(1767732205903, 4055673282236);
        let c = [0.0, r(1767732205903, 2027836641118), 0.6, 1.0];
        let b = [
            r(1471266399579, 7840856788654),
            r(-4482444167858, 7529755066697),
            r(11266239266428, 11593286722821),
            gamma,
        ];

        let mut a_e = [[0.0; STAGES]; STAGES];
        a_e[1][0] = r(1767732205903, 2027836641118);
        a_e[2][0] = r(5535828885825, 10492691773637);
        a_e[2][1] = r(788022342437, 10882634858940);
        a_e[3][0] = r(6485989280629, 16251701735622);
        a_e[3][1] = r(-4246266847089, 9704473918619);
        a_e[3][2] = r(10755448449292, 10357097424841);

        let mut a_i = [[0.0; STAGES]; STAGES];
        a_i[1][0] = gamma;
        a_i[1][1] = gamma;
        a_i[2][0] = r(2746238789719, 10658868560708);
        a_i[2][1] = r(-640167445237, 6845629431997);
        a_i[2][2] = gamma;
        a_i[3] = b;

        ButcherPair {
            a_e,
            b_e: b,
            c_e: c,
            a_i,
            b_i: b,
            c_i: c,
        }
    }

    /// Consistency checks on the stored values: triangularity, row sums
    /// matching the abscissae, stiff accuracy and matching weight rows.
    pub fn verify(&self) -> Result<()> {
        const TOL: f64 = 1e-12;
        for i in 0..STAGES {
            for j in i..STAGES {
                if self.a_e[i][j] != 0.0 {
                    return Err(Error::Config(format!(
                        "explicit tableau not strictly lower triangular at ({i},{j})"
                    )));
                }
                if j > i && self.a_i[i][j] != 0.0 {
                    return Err(Error::Config(format!(
                        "implicit tableau not lower triangular at ({i},{j})"
                    )));
                }
            }
            let row_e: f64 = self.a_e[i].iter().sum();
            let row_i: f64 = self.a_i[i].iter().sum();
            if (row_e - self.c_e[i]).abs() > TOL || (row_i - self.c_i[i]).abs() > TOL {
                return Err(Error::Config(format!("row sum mismatch at stage {i}")));
            }
        }
        let gamma = self.a_i[1][1];
        if self.a_i[0][0] != 0.0 {
            return Err(Error::Config("first implicit diagonal entry must be zero".into()));
        }
        for i in 1..STAGES {
            if (self.a_i[i][i] - gamma).abs() > TOL {
                return Err(Error::Config("implicit diagonal entries must be equal".into()));
            }
        }
        for j in 0..STAGES {
            if self.b_e[j] != self.b_i[j] || self.b_i[j] != self.a_i[STAGES - 1][j] {
                return Err(Error::Config("weights must equal the last implicit row".into()));
            }
        }
        Ok(())
    }

    /// Stability function of the implicit tableau at `z`, by forward
    /// substitution of (I - z A_I) u = 1 and R = 1 + z b^T u.
    pub fn implicit_stability(&self, z: f64) -> f64 {
        let mut u = [0.0; STAGES];
        for i in 0..STAGES {
            let mut acc = 1.0;
            for j in 0..i {
                acc += z * self.a_i[i][j] * u[j];
            }
            u[i] = acc / (1.0 - z * self.a_i[i][i]);
        }
        1.0 + z * self.b_i.iter().zip(&u).map(|(b, u)| b * u).sum::<f64>()
    }

    /// Algebraic limit of the implicit stability function as z -> -infinity.
    pub fn implicit_stability_at_infinity(&self) -> f64 {
        // u_1 -> 1; u_i -> -(1/gamma) sum_{j<i} a_ij u_j; R(-inf) = u_s for a
        // stiffly accurate tableau.
        let gamma = self.a_i[1][1];
        let mut u = [0.0; STAGES];
        u[0] = 1.0;
        for i in 1..STAGES {
            let s: f64 = (0..i).map(|j| self.a_i[i][j] * u[j]).sum();
            u[i] = -s / gamma;
        }
        u[STAGES - 1]
    }
}
