/// Uniform cell-centered grid on the unit square.
///
/// Sample points sit at cell centers `x_i = (i + 1/2) / n_cells`, and all
/// integrals are midpoint quadrature. The spacing is kept implicit as
/// `1 / n_cells` so that `spacing * n_cells = 1` holds by construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Grid {
    n_cells: usize,
}

impl Grid {
    /// A grid with `n_cells` cells per axis. Panics if `n_cells < 2`.
    pub fn new(n_cells: usize) -> Self {
        assert!(n_cells >= 2, "grid needs at least 2 cells per axis");
        Grid { n_cells }
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn spacing(&self) -> f64 {
        1.0 / self.n_cells as f64
    }

    /// Cell-center coordinate of cell `i` along either axis.
    pub fn center(&self, i: usize) -> f64 {
        (i as f64 + 0.5) / self.n_cells as f64
    }

    /// Quadrature weight of one cell for 2-D midpoint integration.
    pub fn cell_area(&self) -> f64 {
        1.0 / (self.n_cells * self.n_cells) as f64
    }
}
