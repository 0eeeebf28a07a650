//! Diffusive within-host infection model with general incidence: basic
//! reproduction number, steady states, a positivity-preserving nonstandard
//! finite difference solver, discrete Lyapunov diagnostics and LHS/PRCC
//! sensitivity analysis of R0.

// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod diagnostics;
pub mod error;
pub mod model;
pub mod output;
pub mod plot;
pub mod run;
pub mod sensitivity;
pub mod solver;

pub use error::{ConfigError, DiagnosticsError, Error, ModelError, SensitivityError, SolverError};
pub use model::{
    compute_r0, disease_free_equilibrium, endemic_equilibrium, residuals, Equilibrium, EquilibriumKind, Incidence,
    IncidenceFunctions, ModelParams, R0Breakdown,
};
pub use solver::{FieldState, Grid1D, Scheme, StepParams};
