use thiserror::Error;

/// Errors produced by the solver library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown player id {0}")]
    UnknownPlayer(usize),
    #[error("unknown fishery id {0}")]
    UnknownFishery(String),
    #[error("scenario validation failed at `{path}`: {message}")]
    Invalid { path: String, message: String },
    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },
    #[error("allocation is inconsistent with scenario: {0}")]
    InconsistentAllocation(String),
    #[error("subgame solver did not converge: {0}")]
    SubgameNonConvergence(String),
    #[error("singular rate system: {0}")]
    Singular(String),
    #[error("instance too large for exhaustive oracle: {0}")]
    InstanceTooLarge(String),
    #[error("bargaining problem infeasible: {0}")]
    Infeasible(String),
    #[error("solver budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("sweep specification invalid: {0}")]
    SweepSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
