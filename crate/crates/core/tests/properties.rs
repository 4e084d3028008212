//! Randomized structural properties of the building blocks: positivity and
//! boundedness of the line integrator, mass bounds of the damped map,
//! nonnegative entropy production, and mollifier mass control.

use proptest::prelude::*;

use broadwell_core::collision::soft_truncate;
use broadwell_core::diagnostics::entropy_production_detailed;
use broadwell_core::fixed_point::damped_map;
use broadwell_core::mollify::mollify;
use broadwell_core::transport::{solve_line, LineProblem};
use broadwell_core::{BoundaryTrace, FieldQuartet, Grid, ScalarField, SolverParams};

fn small_value() -> impl Strategy<Value = f64> {
    0.0..5.0f64
}

proptest! {
    #[test]
    fn soft_truncate_stays_between_zero_and_min(u in 0.0..1e6f64, k in 0.1..100.0f64) {
        let t = soft_truncate(u, k);
        prop_assert!(t >= 0.0);
        prop_assert!(t <= u);
        prop_assert!(t < k);
    }

    #[test]
    fn line_solutions_stay_nonnegative_and_bounded(
        inflow in 0.0..10.0f64,
        gains in prop::collection::vec(0.0..20.0f64, 8),
        absorptions in prop::collection::vec(0.0..20.0f64, 8),
        damping in 0.0..2.0f64,
    ) {
        let sol = solve_line(&LineProblem {
            inflow,
            gain: &gains,
            absorption: &absorptions,
            damping,
            spacing: 0.125,
        });
        // Along the line the value never exceeds the inflow plus the free
        // integral of the gain (absorption only removes mass).
        let mut ceiling = inflow;
        for (v, &g) in sol.centers.iter().zip(&gains) {
            ceiling += g * 0.125;
            prop_assert!(*v >= 0.0);
            prop_assert!(*v <= ceiling + 1e-12);
        }
        prop_assert!(sol.outflow >= 0.0);
        prop_assert!(sol.outflow <= ceiling + 1e-12);
    }

    #[test]
    fn line_solution_monotone_in_inflow(
        lo in 0.0..5.0f64,
        bump in 0.0..5.0f64,
        gains in prop::collection::vec(0.0..5.0f64, 6),
        absorptions in prop::collection::vec(0.0..5.0f64, 6),
    ) {
        let solve = |inflow| solve_line(&LineProblem {
            inflow,
            gain: &gains,
            absorption: &absorptions,
            damping: 0.0,
            spacing: 1.0 / 6.0,
        });
        let a = solve(lo);
        let b = solve(lo + bump);
        for (x, y) in a.centers.iter().zip(&b.centers) {
            prop_assert!(x <= y);
        }
        prop_assert!(a.outflow <= b.outflow);
    }

    #[test]
    fn entropy_production_is_nonnegative(
        v1 in small_value(), v2 in small_value(),
        v3 in small_value(), v4 in small_value(),
        k in 0.5..50.0f64,
    ) {
        let grid = Grid::new(2);
        let q = FieldQuartet::from_fields([
            ScalarField::constant(grid, v1),
            ScalarField::constant(grid, v2),
            ScalarField::constant(grid, v3),
            ScalarField::constant(grid, v4),
        ]);
        let (d, _) = entropy_production_detailed(&q, k);
        prop_assert!(d >= -1e-12);
    }

    #[test]
    fn damped_map_respects_the_mass_ceiling(
        b1 in 0.0..2.0f64, b2 in 0.0..2.0f64,
        b3 in 0.0..2.0f64, b4 in 0.0..2.0f64,
        frozen_level in 0.0..3.0f64,
        alpha in 0.1..1.0f64,
    ) {
        let grid = Grid::new(4);
        let fb = BoundaryTrace::constants(grid, [b1, b2, b3, b4]);
        let params = SolverParams::default().with_alpha(alpha);
        let frozen = FieldQuartet::constant(grid, frozen_level);
        let out = damped_map(&frozen, &fb, &params).unwrap();
        prop_assert!(out.quartet.is_nonnegative());
        prop_assert!(out.quartet.mass() <= fb.truncate(params.k).mass() / alpha + 1e-10);
    }

    #[test]
    fn mollification_never_creates_mass_or_negativity(
        seed_vals in prop::collection::vec(0.0..4.0f64, 64),
        radius in 0.0..0.5f64,
    ) {
        let grid = Grid::new(8);
        let mut f = ScalarField::zeros(grid);
        f.values_mut().copy_from_slice(&seed_vals);
        let m = mollify(&f, radius);
        prop_assert!(m.is_nonnegative());
        prop_assert!(m.mass() <= f.mass() + 1e-12);
    }
}
