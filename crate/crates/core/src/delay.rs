//! History buffer for the delayed integrin field.
//!
//! Two retained snapshots plus the current accepted step provide the nodes of
//! a piecewise-linear interpolation of y at the delayed time `t_hat - chi*tau`.
//! The stage value `y_hat` stands in for y at the stage time itself.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct DelayBuffer {
    pub t1d: f64,
    pub t2d: f64,
    pub tn: f64,
    pub y1: Vec<f64>,
    pub y2: Vec<f64>,
    pub yn: Vec<f64>,
    /// Start of the computation; history before it is the constant extension
    /// of the initial field.
    t_init: f64,
}

impl DelayBuffer {
    /// All three nodes collapse onto the initial time.
    pub fn new(t0: f64, y0: Vec<f64>) -> Self {
        DelayBuffer {
            t1d: t0,
            t2d: t0,
            tn: t0,
            y1: y0.clone(),
            y2: y0.clone(),
            yn: y0,
            t_init: t0,
        }
    }

    /// Integrin field at `t_hat - delay`, interpolated cellwise between the
    /// retained snapshots, the current step and `y_hat`.
    pub fn interpolate_delayed(&self, t_hat: f64, delay: f64, y_hat: &[f64]) -> Result<Vec<f64>> {
        debug_assert_eq!(y_hat.len(), self.yn.len());
        let mut td = t_hat - delay;
        if td >= t_hat {
            // delay = 0: the third case degenerates to the right endpoint
            return Ok(y_hat.to_vec());
        }
        if td < self.t1d {
            if self.t1d == self.t_init {
                // constant pre-initial history
                return Ok(self.y1.clone());
            }
            // roundoff in t_hat - delay can land one ulp below the oldest node
            let tol = 1e-12 * self.t1d.abs().max(1.0);
            if self.t1d - td <= tol {
                td = self.t1d;
            } else {
                return Err(Error::InsufficientHistory {
                    t: td,
                    t1d: self.t1d,
                });
            }
        }
        let lerp = |ta: f64, tb: f64, ya: &[f64], yb: &[f64]| -> Vec<f64> {
            if tb == ta {
                return ya.to_vec();
            }
            let theta = (td - ta) / (tb - ta);
            ya.iter()
                .zip(yb)
                .map(|(&a, &b)| a + theta * (b - a))
                .collect()
        };
        if td < self.t2d {
            Ok(lerp(self.t1d, self.t2d, &self.y1, &self.y2))
        } else if td < self.tn {
            Ok(lerp(self.t2d, self.tn, &self.y2, &self.yn))
        } else {
            Ok(lerp(self.tn, t_hat, &self.yn, y_hat))
        }
    }

    /// Record the accepted step; shift the retained snapshots when the next
    /// delayed time will overshoot t2d.
    pub fn advance(&mut self, t_next: f64, y_next: Vec<f64>, delay: f64) {
        debug_assert!(t_next >= self.tn);
        if t_next - delay >= self.t2d {
            self.t1d = self.t2d;
            self.t2d = self.tn;
            std::mem::swap(&mut self.y1, &mut self.y2);
            std::mem::swap(&mut self.y2, &mut self.yn);
        }
        self.tn = t_next;
        self.yn = y_next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform(v: f64) -> Vec<f64> {
        vec![v; 3]
    }

    fn buf(t1d: f64, t2d: f64, tn: f64, y1: f64, y2: f64, yn: f64) -> DelayBuffer {
        DelayBuffer {
            t1d,
            t2d,
            tn,
            y1: uniform(y1),
            y2: uniform(y2),
            yn: uniform(yn),
            t_init: 0.0,
        }
    }

    #[test]
    fn zero_delay_returns_stage_value() {
        let b = buf(0.0, 1.0, 2.0, 0.0, 10.0, 20.0);
        let y = b.interpolate_delayed(3.0, 0.0, &uniform(30.0)).unwrap();
        assert_eq!(y, uniform(30.0));
    }

    #[test]
    fn linear_history_is_exact_in_all_cases() {
        // y(t) = t cellwise
        let b = buf(0.0, 1.0, 2.0, 0.0, 1.0, 2.0);
        let t_hat = 3.0;
        let y_hat = uniform(3.0);
        for delay in [0.5, 1.5, 2.5, 1.0, 2.0, 3.0] {
            let y = b.interpolate_delayed(t_hat, delay, &y_hat).unwrap();
            for &val in &y {
                assert!(
                    (val - (t_hat - delay)).abs() <= 1e-14,
                    "delay {delay}: got {val}"
                );
            }
        }
    }

    #[test]
    fn case_one_hand_value() {
        let b = buf(0.0, 1.0, 2.0, 0.0, 10.0, 20.0);
        let y = b.interpolate_delayed(3.0, 2.5, &uniform(30.0)).unwrap();
        assert_eq!(y, uniform(5.0));
    }

    #[test]
    fn continuity_across_case_boundaries() {
        let b = buf(0.0, 1.0, 2.0, 3.0, 7.0, 4.0);
        let y_hat = uniform(9.0);
        // t_hat - delay = t2d: case 1 limit equals case 2 start
        let at_t2d = b.interpolate_delayed(3.0, 2.0, &y_hat).unwrap();
        assert_eq!(at_t2d, uniform(7.0));
        // t_hat - delay = tn
        let at_tn = b.interpolate_delayed(3.0, 1.0, &y_hat).unwrap();
        assert_eq!(at_tn, uniform(4.0));
    }

    #[test]
    fn pre_initial_history_is_constant() {
        let b = DelayBuffer::new(0.0, uniform(6.0));
        let y = b.interpolate_delayed(0.5, 2.0, &uniform(8.0)).unwrap();
        assert_eq!(y, uniform(6.0));
    }

    #[test]
    fn insufficient_history_after_shift_errors() {
        let mut b = DelayBuffer::new(0.0, uniform(1.0));
        b.advance(1.0, uniform(2.0), 0.0);
        b.advance(2.0, uniform(3.0), 0.0);
        b.advance(3.0, uniform(4.0), 0.0);
        assert!(b.t1d > 0.0);
        let err = b.interpolate_delayed(3.5, 3.0, &uniform(5.0));
        assert!(matches!(err, Err(Error::InsufficientHistory { .. })));
    }

    #[test]
    fn advance_shift_rule() {
        let mut b = buf(0.0, 1.0, 2.0, 0.0, 10.0, 20.0);
        b.advance(2.1, uniform(21.0), 0.5); // 2.1 - 0.5 >= 1 -> shift
        assert_eq!((b.t1d, b.t2d, b.tn), (1.0, 2.0, 2.1));
        assert_eq!(b.y1, uniform(10.0));
        assert_eq!(b.y2, uniform(20.0));
        assert_eq!(b.yn, uniform(21.0));

        let mut b = buf(0.0, 1.0, 2.0, 0.0, 10.0, 20.0);
        b.advance(2.1, uniform(21.0), 5.0); // no shift
        assert_eq!((b.t1d, b.t2d, b.tn), (0.0, 1.0, 2.1));

        let mut b = buf(0.0, 1.0, 2.0, 0.0, 10.0, 20.0);
        b.advance(2.1, uniform(21.0), 0.0); // delay 0: shift always fires
        assert_eq!((b.t1d, b.t2d, b.tn), (1.0, 2.0, 2.1));
    }

    #[test]
    fn ordering_invariant_over_random_advances() {
        let mut b = DelayBuffer::new(0.0, uniform(0.0));
        let mut t = 0.0;
        for i in 0..200 {
            t += 0.01 + 0.003 * ((i * 7 % 11) as f64);
            b.advance(t, uniform(t), 0.05);
            assert!(b.t1d <= b.t2d && b.t2d <= b.tn);
        }
    }
}
