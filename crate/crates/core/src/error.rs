use thiserror::Error;

/// Errors surfaced by the iterative solvers and the Newton oracle.
///
/// Iteration caps are *not* errors: the solvers return their best iterate
/// with `converged = false` in the report. The variants here indicate either
/// a wiring bug (an ordering guarantee of the scheme was violated beyond
/// floating-point slack) or a genuinely unusable linear system.
#[derive(Debug, Error)]
pub enum SolverError {
    /// An inner sweep of the damped map decreased somewhere beyond slack.
    /// The scheme is provably monotone, so this indicates a bug, not data.
    #[error("monotone inner iteration decreased at sweep {sweep}: max drop {max_drop:.3e} in component {component}")]
    NonMonotone {
        sweep: usize,
        component: usize,
        max_drop: f64,
    },

    /// The alternating scheme lost its even-below / odd-above ordering.
    #[error("bracket ordering violated at sweep {sweep}: overshoot {overshoot:.3e}")]
    BracketViolation { sweep: usize, overshoot: f64 },

    /// The finite-difference Jacobian could not be factorized.
    #[error("singular Jacobian in Newton oracle (condition estimate {cond_estimate:.3e})")]
    SingularJacobian { cond_estimate: f64 },

    /// The Newton oracle hit its iteration cap before reaching tolerance.
    #[error("Newton oracle stalled after {iterations} iterations at residual {residual:.3e}")]
    NewtonStalled { iterations: usize, residual: f64 },

    /// A stage of the continuation loop failed; the offending k is tagged.
    #[error("continuation failed at k = {k}: {source}")]
    ContinuationStage {
        k: f64,
        #[source]
        source: Box<SolverError>,
    },
}
