use thiserror::Error;

/// Errors raised while validating parameters or locating equilibria.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("root function does not change sign on (0, {upper:e}) although R0 = {r0}")]
    RootNotBracketed { upper: f64, r0: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("row {row} is not strictly diagonally dominant (|diag| = {diag:e}, off-diagonal sum = {off:e})")]
    DominanceViolated { row: usize, diag: f64, off: f64 },
    #[error("non-finite value in field {field} at node {node}")]
    NonFiniteState { field: &'static str, node: usize },
    #[error("negative value {value:e} in field {field} at node {node}")]
    NegativeState {
        field: &'static str,
        node: usize,
        value: f64,
    },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid step settings: {0}")]
    InvalidStep(String),
    #[error("state length {got} does not match grid with {expected} nodes")]
    ShapeMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiagnosticsError {
    #[error("argument {0:e} outside the domain (0, inf)")]
    DomainError(f64),
    #[error("Lyapunov constants undefined: rho1 = {rho1:e} must be positive (R02 >= 1)")]
    ConstantsUndefined { rho1: f64 },
    #[error("empty series")]
    EmptySeries,
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SensitivityError {
    #[error("column `{name}` is constant; rank correlation undefined")]
    DegenerateColumn { name: String },
    #[error("invalid sensitivity spec: {0}")]
    InvalidSpec(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid value for `{key}`: {message}")]
    Validation { key: String, message: String },
}

impl ConfigError {
    pub(crate) fn validation(key: &str, message: impl Into<String>) -> Self {
        ConfigError::Validation {
            key: key.to_string(),
            message: message.into(),
        }
    }
}

/// Top-level error for the experiment runners and the CLI.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Diagnostics(#[from] DiagnosticsError),
    #[error(transparent)]
    Sensitivity(#[from] SensitivityError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code: 1 for configuration/validation problems, 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Model(ModelError::InvalidParameter { .. }) => 1,
            Error::Solver(SolverError::InvalidGrid(_) | SolverError::InvalidStep(_))
            | Error::Solver(SolverError::Model(ModelError::InvalidParameter { .. }))
            | Error::Sensitivity(SensitivityError::InvalidSpec(_)) => 1,
            _ => 2,
        }
    }
}
