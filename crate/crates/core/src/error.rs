use thiserror::Error;

/// Errors raised by the planning, simulation and costing routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid target: {0}")]
    InvalidTarget(String),

    #[error("invalid plan: {0}")]
    InvalidPlan(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no feasible segmentation: {0}")]
    Infeasible(String),

    #[error("matrix of dimension 2^{qubits} exceeds the 2^{limit} construction limit")]
    DimensionGuard { qubits: usize, limit: usize },

    #[error("phase factor solve did not converge (residual {residual:.3e}, tolerance {tolerance:.3e})")]
    PhaseSolve { residual: f64, tolerance: f64 },

    #[error("prepared state has zero overlap with the flag-zero subspace")]
    ZeroGoodState,

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
