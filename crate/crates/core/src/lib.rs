//! Steady-state solver and verification toolkit for the four-velocity
//! Broadwell model on the unit square with prescribed inflow data.
//!
//! The four densities `F1..F4` stream along `±x` and `±y` and couple
//! through the quadratic collision term `F3·F4 − F1·F2`, softened by the
//! truncation `t_k(u) = u/(1+u/k)`. The crate provides:
//!
//! * exact characteristic-line transport ([`transport`]),
//! * the damped/mollified constructive iteration and the alternating
//!   bracket scheme that certifies solutions between monotone envelopes
//!   ([`fixed_point`]),
//! * a dense Newton oracle on small grids for cross-validation
//!   ([`oracle`]),
//! * conservation, entropy, compactness and weak-form diagnostics
//!   ([`diagnostics`]).

pub mod boundary;
pub mod collision;
pub mod diagnostics;
pub mod error;
pub mod field;
pub mod fixed_point;
pub mod grid;
pub mod mollify;
pub mod oracle;
pub mod params;
pub mod transport;

pub use boundary::BoundaryTrace;
pub use diagnostics::{Axis, DiagnosticsReport};
pub use error::SolverError;
pub use field::{Component, FieldQuartet, ScalarField};
pub use fixed_point::{ContinuationStage, Pair, SolvePath, SolveReport};
pub use grid::Grid;
pub use params::SolverParams;
