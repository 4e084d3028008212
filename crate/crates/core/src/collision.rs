//! The truncated Broadwell collision operator.
//!
//! Each density enters the collision products through the bounded factor
//! `t_k(u) = u / (1 + u/k)`, which caps every factor at `k` and hence the
//! whole operator at `k²`.

use crate::field::{Component, FieldQuartet, ScalarField};

/// `t_k(u) = u / (1 + u/k)`, evaluated as `u·k / (k + u)` so large `u`
/// does not cancel.
#[inline]
pub fn soft_truncate(u: f64, k: f64) -> f64 {
    u * k / (k + u)
}

/// Pointwise truncated factor field `t_k(F_c)`.
pub fn truncated_factor(quartet: &FieldQuartet, c: Component, k: f64) -> ScalarField {
    quartet.component(c).map(|u| soft_truncate(u, k))
}

/// Pointwise truncated product `t_k(F_a)·t_k(F_b)`.
pub fn truncated_product(quartet: &FieldQuartet, a: Component, b: Component, k: f64) -> ScalarField {
    quartet
        .component(a)
        .zip_with(quartet.component(b), |u, v| {
            soft_truncate(u, k) * soft_truncate(v, k)
        })
}

/// The truncated collision term
/// `Q_k = t_k(F3)·t_k(F4) − t_k(F1)·t_k(F2)`,
/// i.e. the right-hand side of the F1 equation. Bounded by `k²` in
/// magnitude and antisymmetric under the pair swap (F1,F2)↔(F3,F4).
pub fn truncated_collision(quartet: &FieldQuartet, k: f64) -> ScalarField {
    assert!(k > 0.0);
    let gain = truncated_product(quartet, Component::F3, Component::F4, k);
    let loss = truncated_product(quartet, Component::F1, Component::F2, k);
    gain.zip_with(&loss, |g, l| g - l)
}
