//! The constructive solution path for the truncated Broadwell system.
//!
//! Three cooperating iterations:
//!
//! * [`damped_map`] — the Step-I map: freeze a quartet, mollify it, and run
//!   the monotone inner iteration from zero until it settles. Every sweep is
//!   provably pointwise above the previous one; that is asserted.
//! * [`alternating_bracket_pair`] — the interleaved scheme for one
//!   streaming pair with frozen cross gain: even iterates climb from below,
//!   odd iterates descend from above, and the solution is certified by the
//!   closing bracket.
//! * [`solve_truncated`] — the production path: symmetric Gauss–Seidel over
//!   the (F1,F2) and (F3,F4) pairs, each half-step a bracket solve, until a
//!   full sweep no longer moves the quartet.
//!
//! [`picard_fixed_point`] drives `damped_map` to a fixed point of the
//! damped/mollified system, and [`continuation`] walks a truncation
//! schedule with warm starts.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::boundary::BoundaryTrace;
use crate::collision::{soft_truncate, truncated_product};
use crate::error::SolverError;
use crate::field::{Component, FieldQuartet, ScalarField};
use crate::mollify::mollify;
use crate::params::SolverParams;
use crate::transport::{mild_residual, sweep_component};

/// Slack for the monotonicity and ordering assertions: rounding noise in
/// the exponential updates, scaled with the field magnitude.
#[inline]
fn ordering_slack(a: f64, b: f64) -> f64 {
    1e-12 * (1.0 + a.abs().max(b.abs()))
}

/// Which iteration produced a solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolvePath {
    /// Picard iteration of the damped map.
    Picard,
    /// Bracket-based pair alternation on the damped system (Picard fallback).
    DampedBracket,
    /// Bracket-based pair alternation on the undamped truncated system.
    PairAlternation,
}

/// Iteration counts and residuals for one solve.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolveReport {
    pub k: f64,
    pub alpha: f64,
    pub path: SolvePath,
    pub outer_iterations: usize,
    /// Total inner sweeps (damped path) or bracket iterates (bracket paths).
    pub inner_iterations: usize,
    /// L¹ movement of the final outer sweep.
    pub final_increment: f64,
    /// Per-component L¹ self-consistency defect of the produced quartet
    /// against the system it solves.
    pub residual: [f64; 4],
    pub converged: bool,
    #[serde(skip)]
    pub wall_time: Duration,
}

/// Result of one application of the damped map.
#[derive(Clone, Debug)]
pub struct DampedMapOutcome {
    pub quartet: FieldQuartet,
    pub sweeps: usize,
    pub converged: bool,
}

/// The streaming pair a bracket solve works on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pair {
    /// (F1, F2): lines along x.
    Horizontal,
    /// (F3, F4): lines along y.
    Vertical,
}

impl Pair {
    fn components(self) -> (Component, Component) {
        match self {
            Pair::Horizontal => (Component::F1, Component::F2),
            Pair::Vertical => (Component::F3, Component::F4),
        }
    }
}

/// Bracket evolution of one alternating pair solve: the certified lower and
/// upper envelopes, the width per sweep, and whether the bracket closed.
#[derive(Clone, Debug)]
pub struct BracketState {
    pub lower: (ScalarField, ScalarField),
    pub upper: (ScalarField, ScalarField),
    pub width_history: Vec<f64>,
    pub sweeps: usize,
    pub converged: bool,
}

fn truncated_trace(fb: &BoundaryTrace, c: Component, k: f64) -> Vec<f64> {
    fb.trace(c).iter().map(|&v| v.min(k / 2.0)).collect()
}

/// One application of the Step-I map `T`: mollify the frozen quartet, then
/// run the monotone inner iteration from zero until its L¹ increment drops
/// below `tol_inner`.
///
/// Errors with [`SolverError::NonMonotone`] if a sweep decreases anywhere
/// beyond slack (a wiring bug, not a data condition). Hitting `max_inner`
/// is reported through `converged = false`, not an error.
pub fn damped_map(
    frozen: &FieldQuartet,
    fb: &BoundaryTrace,
    params: &SolverParams,
) -> Result<DampedMapOutcome, SolverError> {
    assert!(params.alpha > 0.0, "the damped map needs alpha > 0");
    assert!(frozen.is_nonnegative());
    let k = params.k;
    let alpha = params.alpha;
    let grid = frozen.grid();

    // Truncated factors of the mollified frozen fields: these sit in the
    // convolved slots of the Step-I system and stay fixed all inner sweeps.
    let m: [ScalarField; 4] = std::array::from_fn(|i| {
        mollify(frozen.component(Component::from_index(i)), params.moll_radius)
            .map(|u| soft_truncate(u, k))
    });
    let inflow: [Vec<f64>; 4] =
        std::array::from_fn(|i| truncated_trace(fb, Component::from_index(i), k));

    // Gain couples each component to one inner iterate and one mollified
    // slot; absorption is the mollified partner over the component's own
    // previous-iterate denominator.
    let coefficients = |cur: &FieldQuartet, c: Component| -> (ScalarField, ScalarField) {
        let (inner_src, moll_src) = match c {
            Component::F1 => (Component::F3, Component::F4),
            Component::F2 => (Component::F4, Component::F3),
            Component::F3 => (Component::F1, Component::F2),
            Component::F4 => (Component::F2, Component::F1),
        };
        let gain = cur
            .component(inner_src)
            .zip_with(&m[moll_src.index()], |u, mv| soft_truncate(u, k) * mv);
        let absorption = m[c.partner().index()]
            .zip_with(cur.component(c), |mv, own| mv / (1.0 + own / k));
        (gain, absorption)
    };

    let mut cur = FieldQuartet::zeros(grid);
    let mut sweeps = 0;
    loop {
        let mut next = FieldQuartet::zeros(grid);
        for c in Component::ALL {
            let (gain, absorption) = coefficients(&cur, c);
            let (field, _) = sweep_component(c, &inflow[c.index()], &gain, &absorption, alpha);
            *next.component_mut(c) = field;
        }
        sweeps += 1;

        for c in Component::ALL {
            let old = cur.component(c);
            let new = next.component(c);
            for (&o, &v) in old.values().iter().zip(new.values()) {
                if v < o - ordering_slack(o, v) {
                    return Err(SolverError::NonMonotone {
                        sweep: sweeps,
                        component: c.index() + 1,
                        max_drop: o - v,
                    });
                }
            }
        }

        let increment = next.l1_distance(&cur);
        cur = next;
        if increment <= params.tol_inner {
            return Ok(DampedMapOutcome {
                quartet: cur,
                sweeps,
                converged: true,
            });
        }
        if sweeps >= params.max_inner {
            return Ok(DampedMapOutcome {
                quartet: cur,
                sweeps,
                converged: false,
            });
        }
    }
}

/// Per-component L¹ defect of `f` against the damped/mollified system
/// (one self-consistent transport re-solve per component).
pub fn damped_residual(f: &FieldQuartet, fb: &BoundaryTrace, params: &SolverParams) -> [f64; 4] {
    let k = params.k;
    let moll: [ScalarField; 4] = std::array::from_fn(|i| {
        mollify(f.component(Component::from_index(i)), params.moll_radius)
    });
    let tm = |c: Component| moll[c.index()].map(|u| soft_truncate(u, k));
    std::array::from_fn(|i| {
        let c = Component::from_index(i);
        // In each equation the component itself and its gain partner on the
        // same streaming axis appear unconvolved; everything else is
        // mollified.
        let (gain, absorption) = match c {
            Component::F1 => (
                f.component(Component::F3)
                    .zip_with(&tm(Component::F4), |u, mv| soft_truncate(u, k) * mv),
                tm(Component::F2).zip_with(f.component(c), |mv, own| mv / (1.0 + own / k)),
            ),
            Component::F2 => (
                tm(Component::F3)
                    .zip_with(f.component(Component::F4), |mv, u| mv * soft_truncate(u, k)),
                tm(Component::F1).zip_with(f.component(c), |mv, own| mv / (1.0 + own / k)),
            ),
            Component::F3 => (
                f.component(Component::F1)
                    .zip_with(&tm(Component::F2), |u, mv| soft_truncate(u, k) * mv),
                tm(Component::F4).zip_with(f.component(c), |mv, own| mv / (1.0 + own / k)),
            ),
            Component::F4 => (
                tm(Component::F1)
                    .zip_with(f.component(Component::F2), |mv, u| mv * soft_truncate(u, k)),
                tm(Component::F3).zip_with(f.component(c), |mv, own| mv / (1.0 + own / k)),
            ),
        };
        let inflow = truncated_trace(fb, c, k);
        let (resolved, _) = sweep_component(c, &inflow, &gain, &absorption, params.alpha);
        f.component(c).l1_distance(&resolved)
    })
}

/// Picard iteration of the damped map from zero. On a cap, falls back to
/// bracket-based pair alternation on the damped system; the report records
/// which path produced the result.
pub fn picard_fixed_point(
    fb: &BoundaryTrace,
    params: &SolverParams,
) -> Result<(FieldQuartet, SolveReport), SolverError> {
    assert!(params.alpha > 0.0);
    let started = Instant::now();
    let grid = fb.grid();
    let mut cur = FieldQuartet::zeros(grid);
    let mut inner_total = 0;
    for outer in 1..=params.max_outer {
        let out = damped_map(&cur, fb, params)?;
        inner_total += out.sweeps;
        let increment = out.quartet.l1_distance(&cur);
        cur = out.quartet;
        if increment <= params.tol_outer && out.converged {
            return Ok((
                cur.clone(),
                SolveReport {
                    k: params.k,
                    alpha: params.alpha,
                    path: SolvePath::Picard,
                    outer_iterations: outer,
                    inner_iterations: inner_total,
                    final_increment: increment,
                    residual: damped_residual(&cur, fb, params),
                    converged: true,
                    wall_time: started.elapsed(),
                },
            ));
        }
    }
    // Schauder guarantees existence, not Picard convergence: switch to the
    // alternating bracket scheme on the same damped system.
    let (quartet, mut report) = damped_bracket_solve(fb, params)?;
    report.inner_iterations += inner_total;
    report.wall_time = started.elapsed();
    Ok((quartet, report))
}

/// Bracket-based pair alternation on the damped/mollified system.
fn damped_bracket_solve(
    fb: &BoundaryTrace,
    params: &SolverParams,
) -> Result<(FieldQuartet, SolveReport), SolverError> {
    let started = Instant::now();
    let k = params.k;
    let grid = fb.grid();
    let mut cur = FieldQuartet::zeros(grid);
    let mut bracket_total = 0;
    let mut converged = false;
    let mut increment = f64::INFINITY;
    let mut outer = 0;
    while outer < params.max_outer {
        outer += 1;
        let prev = cur.clone();
        let moll: [ScalarField; 4] = std::array::from_fn(|i| {
            mollify(cur.component(Component::from_index(i)), params.moll_radius)
                .map(|u| soft_truncate(u, k))
        });
        let tf3 = cur.component(Component::F3).map(|u| soft_truncate(u, k));
        let tf4 = cur.component(Component::F4).map(|u| soft_truncate(u, k));

        let gain1 = tf3.zip_with(&moll[3], |a, b| a * b);
        let gain2 = moll[2].zip_with(&tf4, |a, b| a * b);
        let (f1, f2, b12) = bracket_pair(
            &gain1,
            &gain2,
            &truncated_trace(fb, Component::F1, k),
            &truncated_trace(fb, Component::F2, k),
            Pair::Horizontal,
            k,
            params.alpha,
            params.moll_radius,
            params,
        )?;
        *cur.component_mut(Component::F1) = f1;
        *cur.component_mut(Component::F2) = f2;
        bracket_total += b12.sweeps;

        let moll01: [ScalarField; 2] = std::array::from_fn(|i| {
            mollify(cur.component(Component::from_index(i)), params.moll_radius)
                .map(|u| soft_truncate(u, k))
        });
        let tf1 = cur.component(Component::F1).map(|u| soft_truncate(u, k));
        let tf2 = cur.component(Component::F2).map(|u| soft_truncate(u, k));
        let gain3 = tf1.zip_with(&moll01[1], |a, b| a * b);
        let gain4 = moll01[0].zip_with(&tf2, |a, b| a * b);
        let (f3, f4, b34) = bracket_pair(
            &gain3,
            &gain4,
            &truncated_trace(fb, Component::F3, k),
            &truncated_trace(fb, Component::F4, k),
            Pair::Vertical,
            k,
            params.alpha,
            params.moll_radius,
            params,
        )?;
        *cur.component_mut(Component::F3) = f3;
        *cur.component_mut(Component::F4) = f4;
        bracket_total += b34.sweeps;

        increment = cur.l1_distance(&prev);
        if increment <= params.tol_outer && b12.converged && b34.converged {
            converged = true;
            break;
        }
    }
    let residual = damped_residual(&cur, fb, params);
    Ok((
        cur,
        SolveReport {
            k,
            alpha: params.alpha,
            path: SolvePath::DampedBracket,
            outer_iterations: outer,
            inner_iterations: bracket_total,
            final_increment: increment,
            residual,
            converged,
            wall_time: started.elapsed(),
        },
    ))
}

/// The interleaved alternating scheme for one streaming pair with the
/// cross-pair gain frozen: odd iterates descend from above, even iterates
/// climb from below, each step a line solve whose loss couples to the
/// opposite-parity partner and a lag-two own denominator. Returns the
/// bracket midpoints and the bracket history.
pub fn alternating_bracket_pair(
    gain: &ScalarField,
    fb_pair: (&[f64], &[f64]),
    pair: Pair,
    k: f64,
    params: &SolverParams,
) -> Result<(ScalarField, ScalarField, BracketState), SolverError> {
    bracket_pair(
        gain, gain, fb_pair.0, fb_pair.1, pair, k, 0.0, 0.0, params,
    )
}

/// General bracket solve: separate gains per component, optional damping
/// and partner mollification (used by the damped fallback path).
#[allow(clippy::too_many_arguments)]
fn bracket_pair(
    gain_a: &ScalarField,
    gain_b: &ScalarField,
    inflow_a: &[f64],
    inflow_b: &[f64],
    pair: Pair,
    k: f64,
    damping: f64,
    partner_moll: f64,
    params: &SolverParams,
) -> Result<(ScalarField, ScalarField, BracketState), SolverError> {
    assert!(gain_a.is_nonnegative() && gain_b.is_nonnegative());
    let grid = gain_a.grid();
    let (comp_a, comp_b) = pair.components();

    let zero = ScalarField::zeros(grid);
    // Iterates l-1 and l of the scheme, starting from all zero.
    let mut lag_a = zero.clone();
    let mut lag_b = zero.clone();
    let mut prev_a = zero.clone();
    let mut prev_b = zero.clone();

    let mut lower: Option<(ScalarField, ScalarField)> = None;
    let mut upper: Option<(ScalarField, ScalarField)> = None;
    let mut width_history = Vec::new();
    let mut sweeps = 0;
    let mut converged = false;

    while sweeps < params.max_bracket {
        sweeps += 1; // computing iterate l+1 = sweeps

        // Loss of the new iterate: opposite-parity partner (iterate l),
        // over the lag-two own denominator (iterate l-1).
        let absorption_a = mollify(&prev_b, partner_moll)
            .zip_with(&lag_a, |p, own| soft_truncate(p, k) / (1.0 + own / k));
        let (new_a, _) = sweep_component(comp_a, inflow_a, gain_a, &absorption_a, damping);
        let absorption_b = mollify(&prev_a, partner_moll)
            .zip_with(&lag_b, |p, own| soft_truncate(p, k) / (1.0 + own / k));
        let (new_b, _) = sweep_component(comp_b, inflow_b, gain_b, &absorption_b, damping);

        let is_odd = sweeps % 2 == 1;
        if is_odd {
            if let Some((ua, ub)) = &upper {
                check_below(&new_a, ua, sweeps)?;
                check_below(&new_b, ub, sweeps)?;
            }
            if let Some((la, lb)) = &lower {
                check_below(la, &new_a, sweeps)?;
                check_below(lb, &new_b, sweeps)?;
            }
            upper = Some((new_a.clone(), new_b.clone()));
        } else {
            if let Some((la, lb)) = &lower {
                check_below(la, &new_a, sweeps)?;
                check_below(lb, &new_b, sweeps)?;
            }
            if let Some((ua, ub)) = &upper {
                check_below(&new_a, ua, sweeps)?;
                check_below(&new_b, ub, sweeps)?;
            }
            lower = Some((new_a.clone(), new_b.clone()));
        }

        if let (Some((la, lb)), Some((ua, ub))) = (&lower, &upper) {
            let width = ua.l1_distance(la) + ub.l1_distance(lb);
            width_history.push(width);
            if width <= params.tol_bracket {
                converged = true;
            }
        }

        lag_a = std::mem::replace(&mut prev_a, new_a);
        lag_b = std::mem::replace(&mut prev_b, new_b);

        if converged {
            break;
        }
    }

    let (la, lb) = lower.unwrap_or((zero.clone(), zero.clone()));
    let (ua, ub) = upper.unwrap_or((la.clone(), lb.clone()));
    let mid_a = la.zip_with(&ua, |l, u| 0.5 * (l + u));
    let mid_b = lb.zip_with(&ub, |l, u| 0.5 * (l + u));
    Ok((
        mid_a,
        mid_b,
        BracketState {
            lower: (la, lb),
            upper: (ua, ub),
            width_history,
            sweeps,
            converged,
        },
    ))
}

fn check_below(low: &ScalarField, high: &ScalarField, sweep: usize) -> Result<(), SolverError> {
    for (&l, &h) in low.values().iter().zip(high.values()) {
        if l > h + ordering_slack(l, h) {
            return Err(SolverError::BracketViolation {
                sweep,
                overshoot: l - h,
            });
        }
    }
    Ok(())
}

/// Solves the truncated system at one `k` by symmetric pair alternation,
/// starting from zero.
pub fn solve_truncated(
    fb: &BoundaryTrace,
    k: f64,
    params: &SolverParams,
) -> Result<(FieldQuartet, SolveReport), SolverError> {
    solve_truncated_from(FieldQuartet::zeros(fb.grid()), fb, k, params)
}

/// Solves the truncated system at one `k` from a warm start.
pub fn solve_truncated_from(
    initial: FieldQuartet,
    fb: &BoundaryTrace,
    k: f64,
    params: &SolverParams,
) -> Result<(FieldQuartet, SolveReport), SolverError> {
    assert!(k > 0.0);
    let started = Instant::now();
    let tb1 = truncated_trace(fb, Component::F1, k);
    let tb2 = truncated_trace(fb, Component::F2, k);
    let tb3 = truncated_trace(fb, Component::F3, k);
    let tb4 = truncated_trace(fb, Component::F4, k);

    let mut cur = initial;
    let mut bracket_total = 0;
    let mut increment = f64::INFINITY;
    let mut converged = false;
    let mut outer = 0;
    while outer < params.max_outer {
        outer += 1;
        let prev = cur.clone();

        let gain12 = truncated_product(&cur, Component::F3, Component::F4, k);
        let (f1, f2, b12) =
            alternating_bracket_pair(&gain12, (&tb1, &tb2), Pair::Horizontal, k, params)?;
        *cur.component_mut(Component::F1) = f1;
        *cur.component_mut(Component::F2) = f2;
        bracket_total += b12.sweeps;

        let gain34 = truncated_product(&cur, Component::F1, Component::F2, k);
        let (f3, f4, b34) =
            alternating_bracket_pair(&gain34, (&tb3, &tb4), Pair::Vertical, k, params)?;
        *cur.component_mut(Component::F3) = f3;
        *cur.component_mut(Component::F4) = f4;
        bracket_total += b34.sweeps;

        increment = cur.l1_distance(&prev);
        if increment <= params.tol_outer && b12.converged && b34.converged {
            converged = true;
            break;
        }
    }

    let residual = mild_residual(&cur, fb, k);
    Ok((
        cur,
        SolveReport {
            k,
            alpha: 0.0,
            path: SolvePath::PairAlternation,
            outer_iterations: outer,
            inner_iterations: bracket_total,
            final_increment: increment,
            residual,
            converged,
            wall_time: started.elapsed(),
        },
    ))
}

/// One stage of the truncation continuation.
#[derive(Clone, Debug)]
pub struct ContinuationStage {
    pub k: f64,
    pub quartet: FieldQuartet,
    pub report: SolveReport,
    /// L¹ distance to the previous stage's solution (None for the first).
    pub cauchy_increment: Option<f64>,
}

/// Solves along `params.k_schedule`, warm-starting each stage from the
/// previous solution and recording the Cauchy increments.
pub fn continuation(
    fb: &BoundaryTrace,
    params: &SolverParams,
) -> Result<Vec<ContinuationStage>, SolverError> {
    assert!(!params.k_schedule.is_empty(), "empty k_schedule");
    let mut stages: Vec<ContinuationStage> = Vec::new();
    let mut warm = FieldQuartet::zeros(fb.grid());
    for &k in &params.k_schedule {
        let (quartet, report) = solve_truncated_from(warm.clone(), fb, k, params)
            .map_err(|e| SolverError::ContinuationStage {
                k,
                source: Box::new(e),
            })?;
        let cauchy_increment = stages.last().map(|s| s.quartet.l1_distance(&quartet));
        warm = quartet.clone();
        stages.push(ContinuationStage {
            k,
            quartet,
            report,
            cauchy_increment,
        });
    }
    Ok(stages)
}
