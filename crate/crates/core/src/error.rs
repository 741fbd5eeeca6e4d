use thiserror::Error;

use crate::em::CompletionState;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A results or roster file could not be parsed. Carries the 1-based
    /// line number of the offending row.
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    /// The parsed data violates a tournament invariant (duplicate pair,
    /// duplicate team-round, unknown team, ...).
    #[error("invalid tournament: {0}")]
    Validation(String),

    /// A ratio scale violates one of its invariants (draw must map to 1,
    /// reciprocal symmetry, strict monotonicity).
    #[error("invalid ratio scale: {0}")]
    Scale(String),

    /// The comparison graph is disconnected, so neither solver has a
    /// unique solution. Carries the vertex partition into components.
    #[error("comparison graph is disconnected ({} components)", components.len())]
    Disconnected { components: Vec<Vec<usize>> },

    /// Input too small or otherwise degenerate for the requested operation.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Power iteration failed to reach the requested residual.
    #[error("eigenvalue iteration stalled: residual {residual:.3e} after {iterations} iterations")]
    EigenNonConvergence { residual: f64, iterations: usize },

    /// Cyclic coordinate descent hit the sweep cap before the improvement
    /// threshold. The last state is preserved for inspection.
    #[error("completion stopped at sweep cap {sweeps} with lambda_max {lambda_max}")]
    SweepCapExhausted {
        sweeps: usize,
        lambda_max: f64,
        state: Box<CompletionState>,
    },

    /// Linear solve produced a residual above the contract bound.
    #[error("linear system residual {residual:.3e} exceeds bound {bound:.3e}")]
    ResidualTooLarge { residual: f64, bound: f64 },

    /// Two rankings do not cover the same team set.
    #[error("rankings cover different team sets")]
    MismatchedTeams,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
