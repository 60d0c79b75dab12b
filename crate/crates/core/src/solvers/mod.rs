//! Classical numerics backing the quantum algorithms.

mod eigen;
mod fci;
mod linear;
mod minimize;

pub use eigen::{
    hermitian_eigen, solve_generalized_eig, GeneralizedEigProblem, GeneralizedEigSolution,
    DEFAULT_TRIM_THRESHOLD,
};
pub use fci::{fci_oracle, FciResult};
pub use linear::{solve_linear_regularized, DEFAULT_RIDGE};
pub use minimize::{minimize, Method, MinimizeOptions, MinimizeResult, Objective, Status};
