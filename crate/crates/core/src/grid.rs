//! Uniform rectangular grid on a square domain with lexicographic cell
//! numbering.
//!
//! Cells are addressed by a 1-based single index `k = i + (j-1)*nx` for
//! column `i` and row `j`. All internal 0-based storage conversions are
//! private.

use crate::error::{Error, Result};

/// Direction towards a neighbouring cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// +e1, towards larger x1.
    XPlus,
    /// -e1
    XMinus,
    /// +e2, towards larger x2.
    YPlus,
    /// -e2
    YMinus,
}

/// Uniform grid over (a,b) x (a,b).
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub a: f64,
    pub b: f64,
    pub nx: usize,
    pub ny: usize,
    pub h1: f64,
    pub h2: f64,
    pub n_cells: usize,
}

impl GridSpec {
    pub fn new(a: f64, b: f64, nx: usize, ny: usize) -> Result<Self> {
        if !(b > a) {
            return Err(Error::InvalidGrid(format!("need b > a, got a={a}, b={b}")));
        }
        if nx < 3 || ny < 3 {
            return Err(Error::InvalidGrid(format!(
                "interior stencils need nx, ny >= 3, got {nx}x{ny}"
            )));
        }
        Ok(GridSpec {
            a,
            b,
            nx,
            ny,
            h1: (b - a) / nx as f64,
            h2: (b - a) / ny as f64,
            n_cells: nx * ny,
        })
    }

    /// Square grid with `n` cells per direction.
    pub fn square(a: f64, b: f64, n: usize) -> Result<Self> {
        Self::new(a, b, n, n)
    }

    pub fn cell_area(&self) -> f64 {
        self.h1 * self.h2
    }

    fn check(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.n_cells {
            Err(Error::IndexOutOfRange(k, self.n_cells))
        } else {
            Ok(())
        }
    }

    /// Inverse lexicographic map, 1-based: k -> (i, j).
    fn to_ij(&self, k: usize) -> (usize, usize) {
        let j = (k - 1) / self.nx;
        (k - j * self.nx, j + 1)
    }

    /// Center of cell k (1-based).
    pub fn cell_center(&self, k: usize) -> Result<(f64, f64)> {
        self.check(k)?;
        let (i, j) = self.to_ij(k);
        Ok((
            self.a + (i as f64 - 0.5) * self.h1,
            self.a + (j as f64 - 0.5) * self.h2,
        ))
    }

    /// Neighbouring cell of k in direction `dir`, or `None` at the domain
    /// boundary.
    pub fn neighbor(&self, k: usize, dir: Direction) -> Result<Option<usize>> {
        self.check(k)?;
        let (i, j) = self.to_ij(k);
        Ok(match dir {
            Direction::XPlus => (i < self.nx).then(|| k + 1),
            Direction::XMinus => (i > 1).then(|| k - 1),
            Direction::YPlus => (j < self.ny).then(|| k + self.nx),
            Direction::YMinus => (j > 1).then(|| k - self.nx),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn grid4() -> GridSpec {
        GridSpec::square(-2.0, 2.0, 4).unwrap()
    }

    #[test]
    fn construction_invariants() {
        let g = grid4();
        assert_eq!(g.h1, 1.0);
        assert_eq!(g.h2, 1.0);
        assert_eq!(g.n_cells, 16);
        assert!(GridSpec::square(-2.0, 2.0, 2).is_err());
        assert!(GridSpec::new(2.0, -2.0, 4, 4).is_err());
    }

    #[test]
    fn cell_centers() {
        let g = grid4();
        assert_eq!(g.cell_center(1).unwrap(), (-1.5, -1.5));
        assert_eq!(g.cell_center(16).unwrap(), (1.5, 1.5));
        // k=6 -> (i,j) = (2,2)
        assert_eq!(g.cell_center(6).unwrap(), (-0.5, -0.5));
        assert!(g.cell_center(0).is_err());
        assert!(g.cell_center(17).is_err());
    }

    #[test]
    fn neighbors() {
        let g = GridSpec::square(0.0, 3.0, 3).unwrap();
        assert_eq!(g.neighbor(1, Direction::XPlus).unwrap(), Some(2));
        assert_eq!(g.neighbor(3, Direction::XPlus).unwrap(), None);
        assert_eq!(g.neighbor(2, Direction::YPlus).unwrap(), Some(5));
        assert_eq!(g.neighbor(4, Direction::XMinus).unwrap(), None);
        assert_eq!(g.neighbor(2, Direction::YMinus).unwrap(), None);
        assert_eq!(g.neighbor(8, Direction::YPlus).unwrap(), None);
    }

    #[test]
    fn boundary_cells_are_exactly_first_last_column_row() {
        let g = GridSpec::new(0.0, 1.0, 5, 4).unwrap();
        for k in 1..=g.n_cells {
            let (i, j) = g.to_ij(k);
            assert_eq!(g.neighbor(k, Direction::XMinus).unwrap().is_none(), i == 1);
            assert_eq!(
                g.neighbor(k, Direction::XPlus).unwrap().is_none(),
                i == g.nx
            );
            assert_eq!(g.neighbor(k, Direction::YMinus).unwrap().is_none(), j == 1);
            assert_eq!(
                g.neighbor(k, Direction::YPlus).unwrap().is_none(),
                j == g.ny
            );
        }
    }

    proptest! {
        #[test]
        fn index_round_trip(nx in 3usize..40, ny in 3usize..40) {
            let g = GridSpec::new(-1.0, 1.0, nx, ny).unwrap();
            for k in 1..=g.n_cells {
                let (i, j) = g.to_ij(k);
                prop_assert!(1 <= i && i <= nx && 1 <= j && j <= ny);
                prop_assert_eq!(i + (j - 1) * nx, k);
            }
        }

        #[test]
        fn neighbor_round_trip(nx in 3usize..20, ny in 3usize..20, k in 1usize..400) {
            let g = GridSpec::new(-1.0, 1.0, nx, ny).unwrap();
            let k = (k - 1) % g.n_cells + 1;
            for (fwd, bwd) in [
                (Direction::XPlus, Direction::XMinus),
                (Direction::YPlus, Direction::YMinus),
            ] {
                if let Some(n) = g.neighbor(k, fwd).unwrap() {
                    prop_assert_eq!(g.neighbor(n, bwd).unwrap(), Some(k));
                }
            }
        }
    }
}
