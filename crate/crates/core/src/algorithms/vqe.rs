//! Variational eigensolver over a fixed disentangled UCC ansatz.

use crate::error::Result;
use crate::solvers::{minimize, Method, MinimizeOptions, Status};
use crate::system::{build_pool, MolecularSystem, OperatorPool, PoolKind};

use super::ucc::{AnsatzState, EnergyEvaluator};
use super::ResourceReport;

#[derive(Debug, Clone)]
pub struct VqeOptions {
    pub pool: PoolKind,
    pub method: Method,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for VqeOptions {
    fn default() -> Self {
        Self { pool: PoolKind::SD, method: Method::Bfgs, tol: 1e-6, max_iter: 1000 }
    }
}

#[derive(Debug, Clone)]
pub struct VqeResult {
    pub energy: f64,
    pub report: ResourceReport,
    pub ansatz: AnsatzState,
    pub status: Status,
}

pub fn run_vqe(system: &MolecularSystem, opts: &VqeOptions) -> Result<VqeResult> {
    let pool = build_pool(system, opts.pool)?;
    run_vqe_with_pool(system, &pool, opts)
}

/// Minimizes the energy of the ansatz built from every entry of `pool`,
/// starting from zero amplitudes.
pub fn run_vqe_with_pool(
    system: &MolecularSystem,
    pool: &OperatorPool,
    opts: &VqeOptions,
) -> Result<VqeResult> {
    let indices: Vec<usize> = (0..pool.len()).collect();
    let ansatz = AnsatzState::from_pool(pool, &indices);
    optimize_ansatz(system, ansatz, opts.method, opts.tol, opts.max_iter)
}

/// Shared by VQE and ADAPT: optimize every amplitude from the current values.
pub(crate) fn optimize_ansatz(
    system: &MolecularSystem,
    mut ansatz: AnsatzState,
    method: Method,
    tol: f64,
    max_iter: usize,
) -> Result<VqeResult> {
    let n_ps = system.n_pauli_strings();
    let mut report = ResourceReport {
        n_parameters: ansatz.len(),
        n_cnot: ansatz.n_cnot(),
        ..Default::default()
    };
    if ansatz.is_empty() {
        let energy = ansatz.state(system.n_qubits())?.energy(system.hamiltonian())?;
        report.n_pauli_evaluations = n_ps;
        report.final_energy = energy;
        return Ok(VqeResult { energy, report, ansatz, status: Status::Converged });
    }
    let x0 = ansatz.amplitudes.clone();
    let (res, calls, grad_calls) = {
        let mut eval = EnergyEvaluator::new(system, &ansatz);
        let mopts = MinimizeOptions { method, tol, max_iter, ..Default::default() };
        let res = minimize(&mut eval, &x0, &mopts);
        if let Some(e) = eval.error.take() {
            return Err(e);
        }
        (res?, eval.n_energy_calls, eval.n_gradient_energy_calls)
    };
    ansatz.amplitudes = res.x;
    report.n_pauli_evaluations = calls * n_ps;
    report.n_gradient_pauli_evaluations = grad_calls * n_ps;
    report.n_iterations = res.n_iter;
    report.final_energy = res.f;
    Ok(VqeResult { energy: res.f, report, ansatz, status: res.status })
}
