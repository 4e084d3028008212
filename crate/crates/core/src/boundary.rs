use crate::field::Component;
use crate::grid::Grid;

/// The four inflow profiles sampled at cell centers of the 1-D boundary grid.
///
/// `fb1(y)` feeds F1 at x = 0, `fb2(y)` feeds F2 at x = 1, `fb3(x)` feeds F3
/// at y = 0, `fb4(x)` feeds F4 at y = 1. All samples must be nonnegative and
/// finite; mass and entropy are precomputed midpoint quadratures.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryTrace {
    n: usize,
    traces: [Vec<f64>; 4],
    mass: f64,
    entropy: f64,
}

impl BoundaryTrace {
    /// Builds a trace from the four sampled profiles.
    ///
    /// Panics on negative or non-finite samples and on length mismatches;
    /// callers ingesting external data should validate first (the CLI does).
    pub fn new(grid: Grid, traces: [Vec<f64>; 4]) -> Self {
        let n = grid.n_cells();
        for t in &traces {
            assert_eq!(t.len(), n, "trace length must match the grid");
            assert!(
                t.iter().all(|v| v.is_finite() && *v >= 0.0),
                "boundary samples must be nonnegative and finite"
            );
        }
        let mass = traces.iter().flatten().sum::<f64>() / n as f64;
        let entropy = traces
            .iter()
            .flatten()
            .map(|&v| if v > 1.0 { v * v.ln() } else { 0.0 })
            .sum::<f64>()
            / n as f64;
        BoundaryTrace {
            n,
            traces,
            mass,
            entropy,
        }
    }

    pub fn constant(grid: Grid, value: f64) -> Self {
        let n = grid.n_cells();
        BoundaryTrace::new(grid, std::array::from_fn(|_| vec![value; n]))
    }

    /// Per-component constants `[c1, c2, c3, c4]`.
    pub fn constants(grid: Grid, values: [f64; 4]) -> Self {
        let n = grid.n_cells();
        BoundaryTrace::new(grid, std::array::from_fn(|i| vec![values[i]; n]))
    }

    pub fn n_cells(&self) -> usize {
        self.n
    }

    pub fn grid(&self) -> Grid {
        Grid::new(self.n)
    }

    /// The inflow profile feeding `component`.
    pub fn trace(&self, component: Component) -> &[f64] {
        &self.traces[component.index()]
    }

    pub fn traces(&self) -> &[Vec<f64>; 4] {
        &self.traces
    }

    /// Quadrature of the summed inflow profiles.
    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Quadrature of `Σ ∫ f_bi ln⁺ f_bi`.
    pub fn entropy(&self) -> f64 {
        self.entropy
    }

    /// Caps every sample at `k/2`, the inflow condition of the truncated
    /// system. Idempotent, and monotone in `k`.
    pub fn truncate(&self, k: f64) -> BoundaryTrace {
        assert!(k > 0.0);
        let cap = k / 2.0;
        BoundaryTrace::new(
            self.grid(),
            std::array::from_fn(|i| self.traces[i].iter().map(|&v| v.min(cap)).collect()),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncate_below_cap_is_identity() {
        let fb = BoundaryTrace::constant(Grid::new(8), 0.3);
        assert_eq!(fb.truncate(10.0), fb);
    }

    #[test]
    fn truncate_caps_at_half_k() {
        let fb = BoundaryTrace::constant(Grid::new(8), 7.0);
        let t = fb.truncate(4.0);
        assert!(t.trace(Component::F1).iter().all(|&v| v == 2.0));
    }

    #[test]
    fn truncate_keeps_exact_cap_value() {
        let fb = BoundaryTrace::constant(Grid::new(8), 2.0);
        assert_eq!(fb.truncate(4.0), fb);
    }

    #[test]
    fn truncate_is_idempotent_and_monotone_in_k() {
        let grid = Grid::new(8);
        let fb = BoundaryTrace::new(
            grid,
            std::array::from_fn(|i| (0..8).map(|j| (i + j) as f64 * 0.7).collect()),
        );
        let t4 = fb.truncate(4.0);
        assert_eq!(t4.truncate(4.0), t4);
        let t8 = fb.truncate(8.0);
        for c in Component::ALL {
            for (a, b) in t4.trace(c).iter().zip(t8.trace(c)) {
                assert!(a <= b);
            }
        }
    }

    #[test]
    fn mass_is_quadrature_of_all_four_profiles() {
        let fb = BoundaryTrace::constant(Grid::new(16), 0.25);
        assert!((fb.mass() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn entropy_ignores_samples_below_one() {
        let fb = BoundaryTrace::constant(Grid::new(8), 0.5);
        assert_eq!(fb.entropy(), 0.0);
        let hot = BoundaryTrace::constant(Grid::new(8), 3.0);
        assert!((hot.entropy() - 4.0 * 3.0 * 3.0f64.ln()).abs() < 1e-12);
    }

    #[test]
    #[should_panic]
    fn rejects_negative_samples() {
        BoundaryTrace::new(Grid::new(4), std::array::from_fn(|_| vec![-1.0; 4]));
    }
}
