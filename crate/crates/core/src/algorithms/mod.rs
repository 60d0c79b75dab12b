//! The quantum algorithms. Each consumes a `MolecularSystem` and reports
//! an energy together with a [`ResourceReport`].
//!
//! Energies are exact operator averages over the simulated state unless a
//! shot count is requested.

mod adapt;
mod pqe;
mod qite;
mod qk;
mod qpe;
mod spqe;
mod ucc;
mod vqe;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

pub use adapt::{pool_gradients, run_adapt_vqe, run_adapt_with_pool, AdaptOptions, AdaptResult, AdaptStop};
pub use pqe::{pqe_residuals, run_pqe, run_pqe_with_pool, PqeOptions, PqeResult};
pub use qite::{qite_pauli_pool, run_qite, run_qlanczos, NormApprox, QiteOptions, QiteResult};
pub use qk::{
    run_mrsqk, run_qk, select_references, spin_complete, KrylovEvolution, MrsqkOptions, QkOptions, QkResult,
};
pub use qpe::{
    interpolated_readout, inverse_qft, qft, run_qpe, run_qpe_recentered, QpeEvolution, QpeOptions, QpeResult,
};
pub use spqe::{full_excitation_pool, run_spqe, select_by_cumulative_threshold, SpqeOptions, SpqeResult};
pub use ucc::{AnsatzState, EnergyEvaluator};
pub use vqe::{run_vqe, run_vqe_with_pool, VqeOptions, VqeResult};

/// Cost accounting for one algorithm run.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ResourceReport {
    /// Classical parameters (ansatz amplitudes or subspace dimension).
    pub n_parameters: usize,
    /// CNOTs in the ansatz or evolution circuit.
    pub n_cnot: usize,
    /// Pauli-string expectation evaluations for energies and residuals.
    pub n_pauli_evaluations: usize,
    /// Pauli-string expectation evaluations spent on gradients.
    pub n_gradient_pauli_evaluations: usize,
    pub n_iterations: usize,
    pub final_energy: f64,
}

impl ResourceReport {
    /// All Pauli-string evaluations, whatever they were spent on.
    pub fn total_pauli_evaluations(&self) -> usize {
        self.n_pauli_evaluations + self.n_gradient_pauli_evaluations
    }
}

/// A generalized eigenproblem built from quantum-generated states.
#[derive(Debug, Clone)]
pub struct SubspaceResult {
    pub s: DMatrix<Complex64>,
    pub h: DMatrix<Complex64>,
    /// Ascending.
    pub energies: Vec<f64>,
    pub retained_dim: usize,
    /// Ground-state coefficients in the (non-orthogonal) basis.
    pub ground_vector: Vec<Complex64>,
}

impl SubspaceResult {
    pub fn ground_energy(&self) -> f64 {
        self.energies[0]
    }

    pub fn dim(&self) -> usize {
        self.s.nrows()
    }
}
