//! Independent Newton solver used to cross-check the iterative paths.
//!
//! The discretization is shared with the iterative solvers (the same exact
//! line integration), but nothing else is: the nonlinear system is solved
//! as a dense root-finding problem `u − T(u) = 0` with a finite-difference
//! Jacobian, damped steps and a nonnegativity projection. Agreement with
//! the fixed-point paths therefore isolates iteration bugs from
//! discretization choices.
//!
//! Dense Jacobians limit this to small grids; [`MAX_NEWTON_CELLS`] guards
//! the problem size.

use nalgebra::{DMatrix, DVector};

use crate::boundary::BoundaryTrace;
use crate::collision::soft_truncate;
use crate::error::SolverError;
use crate::field::{Component, FieldQuartet};
use crate::grid::Grid;
use crate::mollify::mollify;
use crate::params::SolverParams;
use crate::transport::{solve_component, sweep_component};

/// Largest grid edge the dense oracle accepts (4·n² unknowns).
pub const MAX_NEWTON_CELLS: usize = 16;

/// Max-norm residual at which Newton declares victory.
pub const NEWTON_TOL: f64 = 1e-11;

const MAX_NEWTON_ITER: usize = 60;
const MAX_HALVINGS: usize = 40;
const FD_STEP: f64 = 1e-7;

/// Iteration trace of one Newton solve.
#[derive(Clone, Debug)]
pub struct NewtonReport {
    pub iterations: usize,
    pub residual_norm: f64,
    pub residual_history: Vec<f64>,
}

fn quartet_to_vec(q: &FieldQuartet) -> DVector<f64> {
    let n = q.grid().n_cells();
    let mut v = DVector::zeros(4 * n * n);
    for (ci, f) in q.components().iter().enumerate() {
        for (j, &x) in f.values().iter().enumerate() {
            v[ci * n * n + j] = x;
        }
    }
    v
}

fn vec_to_quartet(v: &DVector<f64>, grid: Grid) -> FieldQuartet {
    let n = grid.n_cells();
    let mut q = FieldQuartet::zeros(grid);
    for ci in 0..4 {
        let f = q.component_mut(Component::from_index(ci));
        for j in 0..n * n {
            f.values_mut()[j] = v[ci * n * n + j];
        }
    }
    q
}

/// Newton with damping on `r(u) = u − T(u)` for any transport re-solve `T`.
fn newton_on<T>(
    grid: Grid,
    initial: &FieldQuartet,
    resolve: T,
) -> Result<(FieldQuartet, NewtonReport), SolverError>
where
    T: Fn(&FieldQuartet) -> FieldQuartet,
{
    let n = grid.n_cells();
    assert!(
        n <= MAX_NEWTON_CELLS,
        "dense Newton oracle is limited to {MAX_NEWTON_CELLS}x{MAX_NEWTON_CELLS} grids"
    );
    let dim = 4 * n * n;
    let residual = |v: &DVector<f64>| -> DVector<f64> {
        let q = vec_to_quartet(v, grid);
        v - quartet_to_vec(&resolve(&q))
    };

    let mut u = quartet_to_vec(initial).map(|x| x.max(0.0));
    let mut r = residual(&u);
    let mut norm = r.amax();
    let mut history = vec![norm];

    for it in 1..=MAX_NEWTON_ITER {
        if norm <= NEWTON_TOL {
            return Ok((
                vec_to_quartet(&u, grid),
                NewtonReport {
                    iterations: it - 1,
                    residual_norm: norm,
                    residual_history: history,
                },
            ));
        }

        // Forward-difference Jacobian, column by column.
        let mut jac = DMatrix::zeros(dim, dim);
        for j in 0..dim {
            let delta = FD_STEP * (1.0 + u[j].abs());
            let mut up = u.clone();
            up[j] += delta;
            let rp = residual(&up);
            for i in 0..dim {
                jac[(i, j)] = (rp[i] - r[i]) / delta;
            }
        }

        let lu = jac.lu();
        let diag: Vec<f64> = (0..dim).map(|i| lu.u()[(i, i)].abs()).collect();
        let d_max = diag.iter().cloned().fold(0.0, f64::max);
        let d_min = diag.iter().cloned().fold(f64::INFINITY, f64::min);
        let step = lu.solve(&r).filter(|_| d_min > 0.0).ok_or(
            SolverError::SingularJacobian {
                cond_estimate: if d_min > 0.0 { d_max / d_min } else { f64::INFINITY },
            },
        )?;

        // Halve until the max-norm residual decreases; keep iterates
        // in the nonnegative cone.
        let mut scale = 1.0;
        let mut accepted = false;
        for _ in 0..MAX_HALVINGS {
            let cand = (&u - scale * &step).map(|x| x.max(0.0));
            let rc = residual(&cand);
            let nc = rc.amax();
            if nc < norm {
                u = cand;
                r = rc;
                norm = nc;
                accepted = true;
                break;
            }
            scale *= 0.5;
        }
        history.push(norm);
        if !accepted {
            return Err(SolverError::NewtonStalled {
                iterations: it,
                residual: norm,
            });
        }
    }

    if norm <= NEWTON_TOL {
        Ok((
            vec_to_quartet(&u, grid),
            NewtonReport {
                iterations: MAX_NEWTON_ITER,
                residual_norm: norm,
                residual_history: history,
            },
        ))
    } else {
        Err(SolverError::NewtonStalled {
            iterations: MAX_NEWTON_ITER,
            residual: norm,
        })
    }
}

/// Newton solve of the undamped truncated system at level `k`.
pub fn newton_truncated(
    fb: &BoundaryTrace,
    k: f64,
    initial: &FieldQuartet,
) -> Result<(FieldQuartet, NewtonReport), SolverError> {
    let grid = fb.grid();
    newton_on(grid, initial, move |q| {
        let mut out = FieldQuartet::zeros(grid);
        for c in Component::ALL {
            *out.component_mut(c) = solve_component(q, c, fb, k, 0.0);
        }
        out
    })
}

/// Newton solve of the damped/mollified Step-I system, for cross-checking
/// the Picard path at the same `(k, alpha, moll_radius)`.
pub fn newton_damped(
    fb: &BoundaryTrace,
    params: &SolverParams,
    initial: &FieldQuartet,
) -> Result<(FieldQuartet, NewtonReport), SolverError> {
    let grid = fb.grid();
    let k = params.k;
    let alpha = params.alpha;
    let radius = params.moll_radius;
    let inflow: [Vec<f64>; 4] = std::array::from_fn(|i| {
        fb.trace(Component::from_index(i))
            .iter()
            .map(|&v| v.min(k / 2.0))
            .collect()
    });
    newton_on(grid, initial, move |q| {
        let tm = |c: Component| {
            mollify(q.component(c), radius).map(|u| soft_truncate(u, k))
        };
        let mut out = FieldQuartet::zeros(grid);
        for c in Component::ALL {
            // Same coefficient placement as the damped fixed-point system:
            // the component and its same-axis gain source stay unconvolved.
            let (gain, absorption) = match c {
                Component::F1 => (
                    q.component(Component::F3)
                        .zip_with(&tm(Component::F4), |u, mv| soft_truncate(u, k) * mv),
                    tm(Component::F2).zip_with(q.component(c), |mv, own| mv / (1.0 + own / k)),
                ),
                Component::F2 => (
                    tm(Component::F3)
                        .zip_with(q.component(Component::F4), |mv, u| mv * soft_truncate(u, k)),
                    tm(Component::F1).zip_with(q.component(c), |mv, own| mv / (1.0 + own / k)),
                ),
                Component::F3 => (
                    q.component(Component::F1)
                        .zip_with(&tm(Component::F2), |u, mv| soft_truncate(u, k) * mv),
                    tm(Component::F4).zip_with(q.component(c), |mv, own| mv / (1.0 + own / k)),
                ),
                Component::F4 => (
                    tm(Component::F1)
                        .zip_with(q.component(Component::F2), |mv, u| mv * soft_truncate(u, k)),
                    tm(Component::F3).zip_with(q.component(c), |mv, own| mv / (1.0 + own / k)),
                ),
            };
            let (field, _) = sweep_component(c, &inflow[c.index()], &gain, &absorption, alpha);
            *out.component_mut(c) = field;
        }
        out
    })
}

/// Outcome of pitting the iterative solver against the Newton oracle.
#[derive(Clone, Debug)]
pub struct CrossValidation {
    pub solver: FieldQuartet,
    pub newton: FieldQuartet,
    /// Pointwise max discrepancy between the two solutions.
    pub max_discrepancy: f64,
    /// Max discrepancy between Newton started from zero and Newton started
    /// from the iterative solution (oracle self-agreement).
    pub self_agreement: f64,
}

/// Runs the pair-alternation solver and the Newton oracle (from zero and
/// from the solver's answer) on the same problem.
pub fn cross_validate(
    fb: &BoundaryTrace,
    k: f64,
    params: &SolverParams,
) -> Result<CrossValidation, SolverError> {
    let (solver, _) = crate::fixed_point::solve_truncated(fb, k, params)?;
    let zero = FieldQuartet::zeros(fb.grid());
    let (from_zero, _) = newton_truncated(fb, k, &zero)?;
    let (from_solver, _) = newton_truncated(fb, k, &solver)?;
    Ok(CrossValidation {
        max_discrepancy: solver.max_abs_diff(&from_zero),
        self_agreement: from_zero.max_abs_diff(&from_solver),
        solver,
        newton: from_zero,
    })
}
