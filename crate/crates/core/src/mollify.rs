//! Discrete mollification with a compactly supported radial bump.
//!
//! The kernel is `(1 − (r/radius)²)³` on `r < radius`, normalized to unit
//! discrete mass. Fields are extended by zero outside the unit square, so
//! mollification never creates mass and loses some near the boundary.

use crate::field::ScalarField;

/// Convolves `f` with the normalized bump of support `radius`.
/// `radius = 0` returns the field unchanged.
pub fn mollify(f: &ScalarField, radius: f64) -> ScalarField {
    assert!(radius >= 0.0, "mollifier radius must be nonnegative");
    let n = f.n_cells();
    let h = 1.0 / n as f64;
    if radius == 0.0 {
        return f.clone();
    }
    let reach = (radius / h).floor() as isize;

    // Kernel weights on the offset stencil, normalized over the full stencil
    // (not the clipped one) so zero extension loses boundary mass.
    let mut offsets = Vec::new();
    let mut total = 0.0;
    for dx in -reach..=reach {
        for dy in -reach..=reach {
            let r = ((dx * dx + dy * dy) as f64).sqrt() * h;
            let w = kernel_weight(r, radius);
            if w > 0.0 {
                offsets.push((dx, dy, w));
                total += w;
            }
        }
    }
    for o in &mut offsets {
        o.2 /= total;
    }

    let mut out = ScalarField::zeros(f.grid());
    let ni = n as isize;
    for ix in 0..ni {
        for iy in 0..ni {
            let mut acc = 0.0;
            for &(dx, dy, w) in &offsets {
                let jx = ix + dx;
                let jy = iy + dy;
                if jx >= 0 && jx < ni && jy >= 0 && jy < ni {
                    acc += w * f.get(jx as usize, jy as usize);
                }
            }
            out.set(ix as usize, iy as usize, acc);
        }
    }
    out
}

#[inline]
fn kernel_weight(r: f64, radius: f64) -> f64 {
    if r >= radius {
        0.0
    } else {
        let s = 1.0 - (r / radius) * (r / radius);
        s * s * s
    }
}
