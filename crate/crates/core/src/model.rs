//! Model constants, the five unknown fields and the pointwise reaction
//! operators.
//!
//! The state per cell is `w = (c1, c2, v, y, kappa)`: proliferating cells,
//! migrating cells, extracellular matrix, bound integrins and contractivity.
//! The reaction operator is split into an explicit part and a stiff implicit
//! part; the delayed integrin value enters only the explicit kappa equation.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Model constants. `m_rate` is the contractivity production rate (the grid
/// resolution uses a different name to avoid the symbol collision).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub mu_c: f64,
    pub eta_1: f64,
    pub gamma: f64,
    pub lambda: f64,
    pub d_c: f64,
    pub d_h: f64,
    pub delta_v: f64,
    pub mu_v: f64,
    pub eta_2: f64,
    pub k_1: f64,
    pub k_m1: f64,
    pub q: f64,
    pub m_rate: f64,
    pub chi: f64,
    pub tau: f64,
}

impl ModelParams {
    /// Parameter block of the convergence experiment.
    pub fn experiment0() -> Self {
        ModelParams {
            mu_c: 1.0,
            eta_1: 0.05,
            gamma: 0.055,
            lambda: 0.076,
            d_c: 1e-3,
            d_h: 1.0,
            delta_v: 10.0,
            mu_v: 0.3,
            eta_2: 0.9,
            k_1: 2.0,
            k_m1: 0.06,
            q: 3.0,
            m_rate: 1.0,
            chi: 0.01,
            tau: 0.04,
        }
    }

    /// Parameter block of the delay-study experiment.
    pub fn experiment1() -> Self {
        ModelParams {
            lambda: 0.152,
            d_c: 1e-2,
            d_h: 10.0,
            delta_v: 5.0,
            ..Self::experiment0()
        }
    }

    /// The base parameter block of the model presentation (M=2, tau=20).
    pub fn base() -> Self {
        ModelParams {
            m_rate: 2.0,
            tau: 20.0,
            ..Self::experiment1()
        }
    }

    /// Physical (macroscale) delay offset chi*tau.
    pub fn delay(&self) -> f64 {
        self.chi * self.tau
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.chi > 0.0 && self.chi < 1.0 || self.chi == 1.0) {
            // chi = 1 is permitted for nonstiff studies.
            return Err(Error::Config(format!("chi must lie in (0, 1], got {}", self.chi)));
        }
        if self.tau < 0.0 {
            return Err(Error::Config(format!("tau must be >= 0, got {}", self.tau)));
        }
        let rates = [
            ("mu_c", self.mu_c),
            ("eta_1", self.eta_1),
            ("gamma", self.gamma),
            ("lambda", self.lambda),
            ("d_c", self.d_c),
            ("d_h", self.d_h),
            ("delta_v", self.delta_v),
            ("mu_v", self.mu_v),
            ("eta_2", self.eta_2),
            ("k_1", self.k_1),
            ("k_m1", self.k_m1),
            ("q", self.q),
            ("m_rate", self.m_rate),
        ];
        for (name, value) in rates {
            if !(value >= 0.0) {
                return Err(Error::Config(format!("{name} must be >= 0, got {value}")));
            }
        }
        Ok(())
    }
}

/// The five unknown fields, one value per grid cell.
#[derive(Debug, Clone, PartialEq)]
pub struct StateField {
    pub c1: Vec<f64>,
    pub c2: Vec<f64>,
    pub v: Vec<f64>,
    pub y: Vec<f64>,
    pub kappa: Vec<f64>,
}

impl StateField {
    pub fn zeros(n: usize) -> Self {
        StateField {
            c1: vec![0.0; n],
            c2: vec![0.0; n],
            v: vec![0.0; n],
            y: vec![0.0; n],
            kappa: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.c1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c1.is_empty()
    }

    /// Per-cell state at 0-based index `i`.
    pub fn cell(&self, i: usize) -> [f64; 5] {
        [self.c1[i], self.c2[i], self.v[i], self.y[i], self.kappa[i]]
    }

    pub fn components(&self) -> [&[f64]; 5] {
        [&self.c1, &self.c2, &self.v, &self.y, &self.kappa]
    }

    /// w += s * r, componentwise.
    pub fn axpy(&mut self, s: f64, r: &Rates) {
        debug_assert_eq!(self.len(), r.c1.len());
        for i in 0..self.len() {
            self.c1[i] += s * r.c1[i];
            self.c2[i] += s * r.c2[i];
            self.v[i] += s * r.v[i];
            self.y[i] += s * r.y[i];
            self.kappa[i] += s * r.kappa[i];
        }
    }

    pub fn all_finite(&self) -> bool {
        self.components()
            .iter()
            .all(|c| c.iter().all(|x| x.is_finite()))
    }
}

/// Per-cell rates of change, same layout as `StateField`.
#[derive(Debug, Clone)]
pub struct Rates {
    pub c1: Vec<f64>,
    pub c2: Vec<f64>,
    pub v: Vec<f64>,
    pub y: Vec<f64>,
    pub kappa: Vec<f64>,
}

impl Rates {
    pub fn zeros(n: usize) -> Self {
        Rates {
            c1: vec![0.0; n],
            c2: vec![0.0; n],
            v: vec![0.0; n],
            y: vec![0.0; n],
            kappa: vec![0.0; n],
        }
    }
}

/// Full reaction operator R(w) with the delayed integrin value substituted
/// into the kappa equation.
pub fn reaction_full(p: &ModelParams, w: [f64; 5], y_delayed: f64) -> [f64; 5] {
    let [c1, c2, v, y, kappa] = w;
    let total = c1 + c2;
    [
        p.mu_c * c1 * (1.0 - total - p.eta_1 * v) + p.gamma * c2 - p.lambda * c1,
        p.lambda * c1 - p.gamma * c2,
        -p.delta_v * total * v + p.mu_v * v * (1.0 - p.eta_2 * total - v),
        (p.k_1 / p.chi) * (1.0 - y) * v - (p.k_m1 / p.chi) * y,
        -(p.q / p.chi) * kappa + (p.m_rate / p.chi) * y_delayed,
    ]
}

/// Stiff implicit reaction part: only the integrin equation.
pub fn reaction_impl(p: &ModelParams, w: [f64; 5]) -> [f64; 5] {
    let [_, _, v, y, _] = w;
    [
        0.0,
        0.0,
        0.0,
        (p.k_1 / p.chi) * (1.0 - y) * v - (p.k_m1 / p.chi) * y,
        0.0,
    ]
}

/// Explicit reaction part: R minus the implicit integrin term.
pub fn reaction_expl(p: &ModelParams, w: [f64; 5], y_delayed: f64) -> [f64; 5] {
    let mut r = reaction_full(p, w, y_delayed);
    r[3] = 0.0;
    r
}

/// Discrete diffusion coefficient T = D_c kappa / (1 + (c1+c2) v).
pub fn diffusion_coefficient(p: &ModelParams, w: [f64; 5]) -> Result<f64> {
    let [c1, c2, v, _, kappa] = w;
    let denom = 1.0 + (c1 + c2) * v;
    if denom <= 0.0 {
        return Err(Error::DegenerateState(format!(
            "diffusion coefficient denominator {denom} <= 0"
        )));
    }
    Ok(p.d_c * kappa / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_state_is_fixed_point() {
        let p = ModelParams::experiment1();
        assert_eq!(reaction_expl(&p, [0.0; 5], 0.0), [0.0; 5]);
        assert_eq!(reaction_impl(&p, [0.0; 5]), [0.0; 5]);
    }

    #[test]
    fn expl_hand_values() {
        // lambda = 0.152, mu_c = 1 (experiment-1 block)
        let p = ModelParams::experiment1();
        let r = reaction_expl(&p, [1.0, 0.0, 0.0, 0.0, 0.0], 0.0);
        assert!((r[0] - (-0.152)).abs() < 1e-15);
        assert!((r[1] - 0.152).abs() < 1e-15);
        assert_eq!(&r[2..], &[0.0, 0.0, 0.0]);

        // q=3, M=1, chi=0.01: kappa component -q/chi + M/chi * y_d
        let r = reaction_expl(&p, [0.0, 0.0, 0.0, 0.0, 1.0], 1.0);
        assert!((r[4] - (-200.0)).abs() < 1e-10);
        assert_eq!(&r[..4], &[0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn impl_hand_values() {
        let p = ModelParams::experiment1(); // k1=2, k-1=0.06, chi=0.01
        let r = reaction_impl(&p, [0.0, 0.0, 0.5, 1.0, 0.0]);
        assert!((r[3] - (-6.0)).abs() < 1e-12);
        let r = reaction_impl(&p, [0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(r[3], 0.0);
        let r = reaction_impl(&p, [0.0, 0.0, 1.0, 0.0, 0.0]);
        assert!((r[3] - 200.0).abs() < 1e-10);
    }

    #[test]
    fn diffusion_coefficient_hand_values() {
        let p = ModelParams::experiment1(); // D_c = 0.01
        assert_eq!(
            diffusion_coefficient(&p, [0.3, 0.4, 0.5, 0.0, 0.0]).unwrap(),
            0.0
        );
        let t = diffusion_coefficient(&p, [0.0, 0.0, 0.7, 0.0, 2.0]).unwrap();
        assert!((t - 0.02).abs() < 1e-15);
        let t = diffusion_coefficient(&p, [0.5, 0.5, 1.0, 0.0, 1.0]).unwrap();
        assert!((t - 0.005).abs() < 1e-15);
        assert!(diffusion_coefficient(&p, [1.0, 1.0, -1.0, 0.0, 1.0]).is_err());
    }

    #[test]
    fn param_validation() {
        let mut p = ModelParams::experiment0();
        assert!(p.validate().is_ok());
        p.chi = 0.0;
        assert!(p.validate().is_err());
        p.chi = 0.01;
        p.tau = -1.0;
        assert!(p.validate().is_err());
    }

    proptest! {
        /// expl + impl recovers the full reaction, and each part vanishes on
        /// the other's components.
        #[test]
        fn split_identity(
            c1 in 0.0..2.0f64, c2 in 0.0..2.0f64, v in 0.0..2.0f64,
            y in 0.0..1.5f64, kappa in 0.0..3.0f64, y_d in 0.0..1.5f64,
        ) {
            let p = ModelParams::experiment1();
            let w = [c1, c2, v, y, kappa];
            let full = reaction_full(&p, w, y_d);
            let e = reaction_expl(&p, w, y_d);
            let i = reaction_impl(&p, w);
            for k in 0..5 {
                prop_assert!((e[k] + i[k] - full[k]).abs() <= 1e-12 * (1.0 + full[k].abs()));
            }
            prop_assert_eq!(e[3], 0.0);
            for k in [0usize, 1, 2, 4] {
                prop_assert_eq!(i[k], 0.0);
            }
        }

        /// T is monotone in kappa and in (c1+c2)v for nonnegative states.
        #[test]
        fn coefficient_monotonicity(
            c in 0.0..2.0f64, v in 0.0..2.0f64, kappa in 0.0..3.0f64,
            dk in 0.0..1.0f64, dv in 0.0..1.0f64,
        ) {
            let p = ModelParams::experiment1();
            let t0 = diffusion_coefficient(&p, [c, 0.0, v, 0.0, kappa]).unwrap();
            let t_up = diffusion_coefficient(&p, [c, 0.0, v, 0.0, kappa + dk]).unwrap();
            let t_dn = diffusion_coefficient(&p, [c, 0.0, v + dv, 0.0, kappa]).unwrap();
            prop_assert!(t_up >= t0);
            prop_assert!(t_dn <= t0 + 1e-16);
        }
    }
}
