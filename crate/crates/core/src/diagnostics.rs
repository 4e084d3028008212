//! Executable versions of the quantities the theory controls: conservation,
//! entropy production, tail mass, translation moduli, exceptional sets, and
//! renormalized weak-form residuals.
//!
//! All bound checks against the theory are scaling or monotonicity checks:
//! the constants depend only on the boundary data and are never explicit.

use serde::{Deserialize, Serialize};

use crate::boundary::BoundaryTrace;
use crate::collision::soft_truncate;
use crate::field::{Component, FieldQuartet, ScalarField};
use crate::fixed_point::Pair;
use crate::transport::outflow_trace;

/// Singular entropy integrand cells are clamped to this sentinel and
/// excluded from the quadrature.
pub const ENTROPY_SENTINEL: f64 = 1e300;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
}

/// Inflow/outflow bookkeeping: total inflow across the four inflow faces,
/// total outflow across the four outflow faces, and their mismatch.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct FluxBalance {
    pub inflow: f64,
    pub outflow: f64,
    pub deviation: f64,
}

/// Inflow is the quadrature of the truncated boundary traces; outflow is
/// the quadrature of the exact line-endpoint values at the outgoing faces,
/// re-integrated with coefficients frozen at `f`.
pub fn flux_balance(f: &FieldQuartet, fb: &BoundaryTrace, k: f64) -> FluxBalance {
    let n = fb.n_cells() as f64;
    let cap = k / 2.0;
    let inflow = fb
        .traces()
        .iter()
        .flatten()
        .map(|&v| v.min(cap))
        .sum::<f64>()
        / n;
    let outflow = Component::ALL
        .iter()
        .map(|&c| outflow_trace(f, c, fb, k).iter().sum::<f64>())
        .sum::<f64>()
        / n;
    FluxBalance {
        inflow,
        outflow,
        deviation: (inflow - outflow).abs(),
    }
}

/// Max deviation of the along-line sums: `(F1+F2)` must be constant along
/// each x-row and `(F3+F4)` along each y-column at a converged solution.
pub fn line_conservation(f: &FieldQuartet) -> f64 {
    let n = f.grid().n_cells();
    let f1 = f.component(Component::F1);
    let f2 = f.component(Component::F2);
    let f3 = f.component(Component::F3);
    let f4 = f.component(Component::F4);
    let mut worst: f64 = 0.0;
    for iy in 0..n {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for ix in 0..n {
            let s = f1.get(ix, iy) + f2.get(ix, iy);
            lo = lo.min(s);
            hi = hi.max(s);
        }
        worst = worst.max(hi - lo);
    }
    for ix in 0..n {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for iy in 0..n {
            let s = f3.get(ix, iy) + f4.get(ix, iy);
            lo = lo.min(s);
            hi = hi.max(s);
        }
        worst = worst.max(hi - lo);
    }
    worst
}

/// The entropy production integral `D^k`: quadrature of
/// `(t_k(F1)t_k(F2) − t_k(F3)t_k(F4)) · ln(t_k(F1)t_k(F2) / t_k(F3)t_k(F4))`,
/// pointwise of the form `(a−b)ln(a/b) ≥ 0`. Also returns the number of
/// singular cells (one factor pair exactly zero against a positive one),
/// which are clamped and excluded from the quadrature.
pub fn entropy_production_detailed(f: &FieldQuartet, k: f64) -> (f64, usize) {
    dissipation_with(f, |u| soft_truncate(u, k))
}

pub fn entropy_production(f: &FieldQuartet, k: f64) -> f64 {
    entropy_production_detailed(f, k).0
}

/// The limiting (untruncated) dissipation functional, same conventions.
pub fn entropy_production_untruncated(f: &FieldQuartet) -> (f64, usize) {
    dissipation_with(f, |u| u)
}

fn dissipation_with(f: &FieldQuartet, t: impl Fn(f64) -> f64) -> (f64, usize) {
    let n = f.grid().n_cells();
    let f1 = f.component(Component::F1).values();
    let f2 = f.component(Component::F2).values();
    let f3 = f.component(Component::F3).values();
    let f4 = f.component(Component::F4).values();
    let mut sum = 0.0;
    let mut excluded = 0;
    for i in 0..n * n {
        let a = t(f1[i]) * t(f2[i]);
        let b = t(f3[i]) * t(f4[i]);
        let term = if a == b {
            0.0
        } else if a == 0.0 || b == 0.0 {
            ENTROPY_SENTINEL
        } else {
            (a - b) * (a / b).ln()
        };
        if term >= ENTROPY_SENTINEL {
            excluded += 1;
        } else {
            sum += term;
        }
    }
    (sum / (n * n) as f64, excluded)
}

/// Quadrature of `Σ_i F_i · 1(F_i > threshold)`.
pub fn tail_mass(f: &FieldQuartet, threshold: f64) -> f64 {
    let n = f.grid().n_cells();
    f.components()
        .iter()
        .map(|c| {
            c.values()
                .iter()
                .filter(|&&v| v > threshold)
                .sum::<f64>()
        })
        .sum::<f64>()
        / (n * n) as f64
}

/// L¹ norm of the shifted difference over the overlap region `[0, 1−h]`
/// (no wrap-around). `h` must be a multiple of the grid spacing; with
/// `renormalize` the difference is taken of `ln(1+f)` instead of `f`.
pub fn translation_modulus(f: &ScalarField, axis: Axis, h: f64, renormalize: bool) -> f64 {
    let n = f.n_cells();
    let cells = h * n as f64;
    let m = cells.round() as usize;
    assert!(
        (cells - m as f64).abs() < 1e-9,
        "shift must be a multiple of the grid spacing"
    );
    if m == 0 {
        return 0.0;
    }
    assert!(m < n, "shift must be inside the unit interval");
    let g = |v: f64| if renormalize { (1.0 + v).ln() } else { v };
    let mut sum = 0.0;
    for i in 0..n - m {
        for j in 0..n {
            let (a, b) = match axis {
                Axis::X => (f.get(i + m, j), f.get(i, j)),
                Axis::Y => (f.get(j, i + m), f.get(j, i)),
            };
            sum += (g(a) - g(b)).abs();
        }
    }
    sum / (n * n) as f64
}

/// Exceptional characteristic lines of one streaming pair: the rows
/// (columns) where the opposing inflow datum or the outgoing trace is at
/// least `Λ/ε`, off which the pair is uniformly bounded.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExceptionalSet {
    /// Fraction of lines flagged.
    pub measure: f64,
    pub indices: Vec<usize>,
    /// Max of the pair's forward component off the flagged lines, and its
    /// theoretical ceiling `(Λ/ε)·exp(2Λ/ε)`.
    pub complement_max_primary: f64,
    pub linf_bound_primary: f64,
    /// Max of the backward partner off the flagged lines; its ceiling is
    /// twice the primary one.
    pub complement_max_partner: f64,
    pub linf_bound_partner: f64,
}

/// Flags the lines `{ fb_back ≥ Λ/ε or F_fwd(outflow) ≥ Λ/ε }` for the
/// chosen pair and measures the pair's sup off them.
pub fn exceptional_set(
    f: &FieldQuartet,
    fb: &BoundaryTrace,
    k: f64,
    eps: f64,
    lambda: f64,
    pair: Pair,
) -> ExceptionalSet {
    assert!(eps > 0.0 && lambda > 0.0);
    let n = f.grid().n_cells();
    let threshold = lambda / eps;
    let (fwd, back) = match pair {
        Pair::Horizontal => (Component::F1, Component::F2),
        Pair::Vertical => (Component::F3, Component::F4),
    };
    let outgoing = outflow_trace(f, fwd, fb, k);
    let back_data = fb.trace(back);
    let indices: Vec<usize> = (0..n)
        .filter(|&t| back_data[t] >= threshold || outgoing[t] >= threshold)
        .collect();
    let measure = indices.len() as f64 / n as f64;

    let flagged = |t: usize| indices.binary_search(&t).is_ok();
    let mut max_primary: f64 = 0.0;
    let mut max_partner: f64 = 0.0;
    for t in (0..n).filter(|&t| !flagged(t)) {
        for s in 0..n {
            let (ix, iy) = match pair {
                Pair::Horizontal => (s, t),
                Pair::Vertical => (t, s),
            };
            max_primary = max_primary.max(f.component(fwd).get(ix, iy));
            max_partner = max_partner.max(f.component(back).get(ix, iy));
        }
    }
    let bound = threshold * (2.0 * threshold).exp();
    ExceptionalSet {
        measure,
        indices,
        complement_max_primary: max_primary,
        linf_bound_primary: bound,
        complement_max_partner: max_partner,
        linf_bound_partner: 2.0 * bound,
    }
}

/// The low-degree separable polynomial test family `x^a y^b`, `a,b ≤ 2`
/// (the constant is `a = b = 0`).
pub fn polynomial_test_family() -> Vec<(u32, u32)> {
    let mut fam = Vec::new();
    for a in 0..=2 {
        for b in 0..=2 {
            fam.push((a, b));
        }
    }
    fam
}

/// Max absolute mismatch of the renormalized weak identity per component,
/// over the polynomial test family: both sides of the `ln(1+F)` weak form
/// (boundary terms from exact line endpoints, collision terms divided by
/// `1 + F`) are evaluated by midpoint quadrature and compared.
pub fn renormalized_residual(f: &FieldQuartet, fb: &BoundaryTrace, k: f64) -> [f64; 4] {
    let n = f.grid().n_cells();
    let grid = f.grid();
    let cap = k / 2.0;
    let family = polynomial_test_family();

    // Truncated collision term Q = t3·t4 − t1·t2 at cell centers.
    let q = crate::collision::truncated_collision(f, k);

    let mut out = [0.0; 4];
    for c in Component::ALL {
        let field = f.component(c);
        let outgoing = outflow_trace(f, c, fb, k);
        let incoming: Vec<f64> = fb.trace(c).iter().map(|&v| v.min(cap)).collect();
        // Sign of Q in this component's equation, and the streaming setup.
        let (axis, forward, q_sign) = match c {
            Component::F1 => (Axis::X, true, 1.0),
            Component::F2 => (Axis::X, false, -1.0),
            Component::F3 => (Axis::Y, true, -1.0),
            Component::F4 => (Axis::Y, false, 1.0),
        };
        let mut worst: f64 = 0.0;
        for &(pa, pb) in &family {
            let phi = |x: f64, y: f64| x.powi(pa as i32) * y.powi(pb as i32);
            let dphi = |x: f64, y: f64| match axis {
                Axis::X => {
                    if pa == 0 {
                        0.0
                    } else {
                        pa as f64 * x.powi(pa as i32 - 1) * y.powi(pb as i32)
                    }
                }
                Axis::Y => {
                    if pb == 0 {
                        0.0
                    } else {
                        pb as f64 * x.powi(pa as i32) * y.powi(pb as i32 - 1)
                    }
                }
            };
            // Boundary terms: the streaming face integral of φ·ln(1+F),
            // far face minus near face along the streaming axis.
            let mut lhs = 0.0;
            for t in 0..n {
                let tc = grid.center(t);
                let (phi0, phi1) = match axis {
                    Axis::X => (phi(0.0, tc), phi(1.0, tc)),
                    Axis::Y => (phi(tc, 0.0), phi(tc, 1.0)),
                };
                let (near, far) = if forward {
                    (incoming[t], outgoing[t])
                } else {
                    (outgoing[t], incoming[t])
                };
                lhs += (phi1 * (1.0 + far).ln() - phi0 * (1.0 + near).ln()) / n as f64;
            }
            let mut rhs = 0.0;
            for ix in 0..n {
                for iy in 0..n {
                    let x = grid.center(ix);
                    let y = grid.center(iy);
                    let v = field.get(ix, iy);
                    lhs -= (1.0 + v).ln() * dphi(x, y) / (n * n) as f64;
                    rhs += phi(x, y) * q_sign * q.get(ix, iy) / (1.0 + v) / (n * n) as f64;
                }
            }
            worst = worst.max((lhs - rhs).abs());
        }
        out[c.index()] = worst;
    }
    out
}

/// One translation-modulus measurement.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModulusEntry {
    /// Component number 1..4.
    pub component: usize,
    pub axis: Axis,
    pub h: f64,
    pub raw: f64,
    pub renormalized: f64,
}

/// Everything the theory ledgers about one solution, as flat values.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub component_masses: [f64; 4],
    pub inflow_total: f64,
    pub outflow_total: f64,
    pub flux_deviation: f64,
    pub line_conservation_max_dev: f64,
    pub entropy_boundary: f64,
    pub entropy_production: f64,
    pub entropy_production_excluded_cells: usize,
    pub entropy_production_untruncated: f64,
    pub tail_mass_at_k: f64,
    pub translation_moduli: Vec<ModulusEntry>,
    pub exceptional_eps: f64,
    pub exceptional_lambda: f64,
    pub exceptional_measure_horizontal: f64,
    pub exceptional_measure_vertical: f64,
    pub renorm_residuals: [f64; 4],
}

/// Default (ε, Λ) used by [`full_report`] for the exceptional-set probe.
pub const DEFAULT_EXCEPTIONAL_EPS: f64 = 0.25;
pub const DEFAULT_EXCEPTIONAL_LAMBDA: f64 = 2.0;

/// Assembles the full diagnostics ledger for one solution.
pub fn full_report(f: &FieldQuartet, fb: &BoundaryTrace, k: f64) -> DiagnosticsReport {
    let n = f.grid().n_cells();
    let h = f.grid().spacing();
    let flux = flux_balance(f, fb, k);
    let (dk, excluded) = entropy_production_detailed(f, k);
    let (d_untrunc, _) = entropy_production_untruncated(f);

    let mut moduli = Vec::new();
    for c in Component::ALL {
        for axis in [Axis::X, Axis::Y] {
            for cells in [1usize, 2, 4] {
                if cells < n {
                    let shift = cells as f64 * h;
                    moduli.push(ModulusEntry {
                        component: c.index() + 1,
                        axis,
                        h: shift,
                        raw: translation_modulus(f.component(c), axis, shift, false),
                        renormalized: translation_modulus(f.component(c), axis, shift, true),
                    });
                }
            }
        }
    }

    let eps = DEFAULT_EXCEPTIONAL_EPS;
    let lambda = DEFAULT_EXCEPTIONAL_LAMBDA;
    let exc_h = exceptional_set(f, fb, k, eps, lambda, Pair::Horizontal);
    let exc_v = exceptional_set(f, fb, k, eps, lambda, Pair::Vertical);

    DiagnosticsReport {
        component_masses: std::array::from_fn(|i| {
            f.component(Component::from_index(i)).mass()
        }),
        inflow_total: flux.inflow,
        outflow_total: flux.outflow,
        flux_deviation: flux.deviation,
        line_conservation_max_dev: line_conservation(f),
        entropy_boundary: fb.entropy(),
        entropy_production: dk,
        entropy_production_excluded_cells: excluded,
        entropy_production_untruncated: d_untrunc,
        tail_mass_at_k: tail_mass(f, k),
        translation_moduli: moduli,
        exceptional_eps: eps,
        exceptional_lambda: lambda,
        exceptional_measure_horizontal: exc_h.measure,
        exceptional_measure_vertical: exc_v.measure,
        renorm_residuals: renormalized_residual(f, fb, k),
    }
}
