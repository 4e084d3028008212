use crate::grid::Grid;

/// A scalar sample on the 2-D grid, indexed `(i_x, i_y)` at cell centers.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    n: usize,
    data: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(grid: Grid) -> Self {
        ScalarField {
            n: grid.n_cells(),
            data: vec![0.0; grid.n_cells() * grid.n_cells()],
        }
    }

    pub fn constant(grid: Grid, value: f64) -> Self {
        ScalarField {
            n: grid.n_cells(),
            data: vec![value; grid.n_cells() * grid.n_cells()],
        }
    }

    /// Builds a field from a function of the cell-center coordinates.
    pub fn from_fn(grid: Grid, mut f: impl FnMut(f64, f64) -> f64) -> Self {
        let n = grid.n_cells();
        let mut data = vec![0.0; n * n];
        for ix in 0..n {
            for iy in 0..n {
                data[ix * n + iy] = f(grid.center(ix), grid.center(iy));
            }
        }
        ScalarField { n, data }
    }

    pub fn n_cells(&self) -> usize {
        self.n
    }

    pub fn grid(&self) -> Grid {
        Grid::new(self.n)
    }

    #[inline]
    pub fn get(&self, ix: usize, iy: usize) -> f64 {
        self.data[ix * self.n + iy]
    }

    #[inline]
    pub fn set(&mut self, ix: usize, iy: usize, value: f64) {
        self.data[ix * self.n + iy] = value;
    }

    pub fn values(&self) -> &[f64] {
        &self.data
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// Pointwise map into a new field.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ScalarField {
        ScalarField {
            n: self.n,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Pointwise combination of two fields on the same grid.
    pub fn zip_with(&self, other: &ScalarField, f: impl Fn(f64, f64) -> f64) -> ScalarField {
        assert_eq!(self.n, other.n, "grid mismatch");
        ScalarField {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    /// Midpoint-quadrature integral over the unit square.
    pub fn mass(&self) -> f64 {
        self.data.iter().sum::<f64>() / (self.n * self.n) as f64
    }

    /// L¹ distance to another field under midpoint quadrature.
    pub fn l1_distance(&self, other: &ScalarField) -> f64 {
        assert_eq!(self.n, other.n, "grid mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a - b).abs())
            .sum::<f64>()
            / (self.n * self.n) as f64
    }

    pub fn max_abs_diff(&self, other: &ScalarField) -> f64 {
        assert_eq!(self.n, other.n, "grid mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_value(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|&v| v >= 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

/// One of the four Broadwell densities, named after its velocity.
///
/// `F1` streams along +x, `F2` along -x, `F3` along +y, `F4` along -y.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Component {
    F1,
    F2,
    F3,
    F4,
}

impl Component {
    pub const ALL: [Component; 4] = [Component::F1, Component::F2, Component::F3, Component::F4];

    pub fn index(self) -> usize {
        match self {
            Component::F1 => 0,
            Component::F2 => 1,
            Component::F3 => 2,
            Component::F4 => 3,
        }
    }

    pub fn from_index(i: usize) -> Component {
        Component::ALL[i]
    }

    /// The same-axis partner whose truncated density drives this
    /// component's loss term (1↔2, 3↔4).
    pub fn partner(self) -> Component {
        match self {
            Component::F1 => Component::F2,
            Component::F2 => Component::F1,
            Component::F3 => Component::F4,
            Component::F4 => Component::F3,
        }
    }

    /// The cross pair whose truncated product feeds this component's gain.
    pub fn gain_pair(self) -> (Component, Component) {
        match self {
            Component::F1 | Component::F2 => (Component::F3, Component::F4),
            Component::F3 | Component::F4 => (Component::F1, Component::F2),
        }
    }
}

/// The solver state: all four densities on one grid.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldQuartet {
    fields: [ScalarField; 4],
}

impl FieldQuartet {
    pub fn zeros(grid: Grid) -> Self {
        FieldQuartet {
            fields: [
                ScalarField::zeros(grid),
                ScalarField::zeros(grid),
                ScalarField::zeros(grid),
                ScalarField::zeros(grid),
            ],
        }
    }

    pub fn constant(grid: Grid, value: f64) -> Self {
        FieldQuartet {
            fields: [
                ScalarField::constant(grid, value),
                ScalarField::constant(grid, value),
                ScalarField::constant(grid, value),
                ScalarField::constant(grid, value),
            ],
        }
    }

    pub fn from_fields(fields: [ScalarField; 4]) -> Self {
        let n = fields[0].n_cells();
        assert!(fields.iter().all(|f| f.n_cells() == n), "grid mismatch");
        FieldQuartet { fields }
    }

    pub fn grid(&self) -> Grid {
        self.fields[0].grid()
    }

    pub fn component(&self, c: Component) -> &ScalarField {
        &self.fields[c.index()]
    }

    pub fn component_mut(&mut self, c: Component) -> &mut ScalarField {
        &mut self.fields[c.index()]
    }

    pub fn components(&self) -> &[ScalarField; 4] {
        &self.fields
    }

    /// Total mass, summed over the four components.
    pub fn mass(&self) -> f64 {
        self.fields.iter().map(ScalarField::mass).sum()
    }

    /// Sum of component-wise L¹ distances.
    pub fn l1_distance(&self, other: &FieldQuartet) -> f64 {
        self.fields
            .iter()
            .zip(&other.fields)
            .map(|(a, b)| a.l1_distance(b))
            .sum()
    }

    pub fn max_abs_diff(&self, other: &FieldQuartet) -> f64 {
        self.fields
            .iter()
            .zip(&other.fields)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.fields.iter().all(ScalarField::is_nonnegative)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_field_has_unit_mass() {
        let f = ScalarField::constant(Grid::new(16), 1.0);
        assert_eq!(f.mass(), 1.0);
    }

    #[test]
    fn zero_field_has_zero_mass() {
        assert_eq!(ScalarField::zeros(Grid::new(8)).mass(), 0.0);
    }

    #[test]
    fn quartet_mass_sums_components() {
        let q = FieldQuartet::constant(Grid::new(16), 0.5);
        assert!((q.mass() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn from_fn_uses_cell_centers() {
        let f = ScalarField::from_fn(Grid::new(4), |x, _| x);
        assert_eq!(f.get(0, 0), 0.125);
        assert_eq!(f.get(3, 2), 0.875);
    }

    #[test]
    fn component_partners_and_gain_pairs() {
        assert_eq!(Component::F1.partner(), Component::F2);
        assert_eq!(Component::F4.partner(), Component::F3);
        assert_eq!(Component::F2.gain_pair(), (Component::F3, Component::F4));
        assert_eq!(Component::F3.gain_pair(), (Component::F1, Component::F2));
    }
}
