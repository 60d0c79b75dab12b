//! Projective quantum eigensolver: drive the projected residuals
//! `r_μ = ⟨Φ_μ|U†HU|Φ₀⟩` to zero with a diagonal quasi-Newton update.

use std::f64::consts::FRAC_PI_4;

use crate::error::{Error, Result};
use crate::exponentiate::exponentiate_pauli_string;
use crate::circuit::Circuit;
use crate::state::StateVector;
use crate::system::{build_pool, MolecularSystem, OperatorPool, PoolKind};

use super::ucc::AnsatzState;
use super::ResourceReport;

/// Consecutive residual-norm increases tolerated before giving up.
const DIVERGENCE_PATIENCE: usize = 5;

#[derive(Debug, Clone)]
pub struct PqeOptions {
    pub pool: PoolKind,
    pub residual_tol: f64,
    pub max_iter: usize,
}

impl Default for PqeOptions {
    fn default() -> Self {
        Self { pool: PoolKind::SD, residual_tol: 1e-6, max_iter: 500 }
    }
}

#[derive(Debug, Clone)]
pub struct PqeResult {
    pub energy: f64,
    pub report: ResourceReport,
    pub ansatz: AnsatzState,
    pub residual_norm: f64,
}

pub fn run_pqe(system: &MolecularSystem, opts: &PqeOptions) -> Result<PqeResult> {
    let pool = build_pool(system, opts.pool)?;
    run_pqe_with_pool(system, &pool, opts)
}

pub fn run_pqe_with_pool(
    system: &MolecularSystem,
    pool: &OperatorPool,
    opts: &PqeOptions,
) -> Result<PqeResult> {
    let indices: Vec<usize> = (0..pool.len()).collect();
    let ansatz = AnsatzState::from_pool(pool, &indices);
    let denominators: Vec<f64> = pool.entries().iter().map(|e| e.denominator).collect();
    let mut report = ResourceReport::default();
    let r = solve_residuals(system, ansatz, &denominators, opts.residual_tol, opts.max_iter, &mut report)?;
    Ok(r)
}

/// `e^{(π/4)κ}` as a circuit: the even superposition of the reference and
/// the excited determinant.
fn quarter_rotation(generator: &crate::pauli::QubitOperator) -> Result<Circuit> {
    let mut c = Circuit::new();
    for (coef, s) in generator.terms() {
        let (circ, phase) = exponentiate_pauli_string(coef * FRAC_PI_4, s)?;
        c.add_circuit(&circ.with_global_phase(phase));
    }
    Ok(c)
}

/// Residuals and energy of `ansatz`, each `r_μ` assembled from the three
/// expectation values `⟨Ω_μ|Ā|Ω_μ⟩ − ½⟨Φ₀|Ā|Φ₀⟩ − ½⟨Φ_μ|Ā|Φ_μ⟩` with
/// `Ā = U†HU`.
pub fn pqe_residuals(system: &MolecularSystem, ansatz: &AnsatzState) -> Result<(Vec<f64>, f64)> {
    let n = system.n_qubits();
    let h = system.hamiltonian();
    let u = ansatz.circuit()?;
    let bar = |prep: &Circuit| -> Result<f64> {
        let mut s = StateVector::basis_state(n, ansatz.reference)?;
        s.apply_circuit(prep)?;
        s.apply_circuit(&u)?;
        s.energy(h)
    };
    let a00 = bar(&Circuit::new())?;
    let mut residuals = Vec::with_capacity(ansatz.len());
    for (gen, ex) in ansatz.generators.iter().zip(&ansatz.excitations) {
        let omega = bar(&quarter_rotation(gen)?)?;
        let mu = ex.apply(ansatz.reference);
        let mut s = StateVector::basis_state(n, mu)?;
        s.apply_circuit(&u)?;
        let amm = s.energy(h)?;
        residuals.push(omega - 0.5 * a00 - 0.5 * amm);
    }
    Ok((residuals, a00))
}

/// Fixed-point iteration `t_μ ← t_μ + r_μ/Δ_μ` until `‖r‖₂ < tol`.
pub(crate) fn solve_residuals(
    system: &MolecularSystem,
    mut ansatz: AnsatzState,
    denominators: &[f64],
    tol: f64,
    max_iter: usize,
    report: &mut ResourceReport,
) -> Result<PqeResult> {
    if let Some(i) = denominators.iter().position(|d| d.abs() < 1e-12) {
        return Err(Error::InvalidArgument(format!(
            "zero energy denominator for operator {}",
            ansatz.excitations[i]
        )));
    }
    let n_ps = system.n_pauli_strings();
    let mut prev_norm = f64::INFINITY;
    let mut growth = 0;
    let mut iter = 0;
    loop {
        let (r, energy) = pqe_residuals(system, &ansatz)?;
        report.n_pauli_evaluations += n_ps * (2 * ansatz.len() + 1);
        let norm = r.iter().map(|x| x * x).sum::<f64>().sqrt();
        report.final_energy = energy;
        report.n_parameters = ansatz.len();
        report.n_cnot = ansatz.n_cnot();
        if norm < tol || iter >= max_iter {
            if norm >= tol {
                return Err(Error::Convergence(format!(
                    "residual norm {norm:.3e} after {iter} iterations"
                )));
            }
            return Ok(PqeResult { energy, report: report.clone(), ansatz, residual_norm: norm });
        }
        if !norm.is_finite() {
            return Err(Error::Numerical("residual norm is not finite".into()));
        }
        growth = if norm > prev_norm { growth + 1 } else { 0 };
        if growth >= DIVERGENCE_PATIENCE {
            return Err(Error::Convergence(format!(
                "residual norm grew for {DIVERGENCE_PATIENCE} consecutive iterations (now {norm:.3e})"
            )));
        }
        prev_norm = norm;
        for ((t, ri), d) in ansatz.amplitudes.iter_mut().zip(&r).zip(denominators) {
            *t += ri / d;
        }
        iter += 1;
        report.n_iterations += 1;
    }
}
