//! Selected PQE: grow the ansatz from the residual state
//! `|r̃⟩ = U† e^{iΔtH} U|Φ₀⟩`, whose amplitudes on excited determinants are
//! `iΔt·r_μ` to first order.

use std::collections::HashMap;

use crate::basis::BasisAddress;
use crate::dense::particle_sector;
use crate::dynamics::{trotter_circuit, EvolutionSpec};
use crate::error::{Error, Result};
use crate::state::StateVector;
use crate::system::{Excitation, MolecularSystem, OperatorPool, PoolKind};

use super::pqe::solve_residuals;
use super::ucc::AnsatzState;
use super::ResourceReport;

#[derive(Debug, Clone)]
pub struct SpqeOptions {
    /// Residual-norm budget for operators left out of the ansatz.
    pub omega: f64,
    pub dt: f64,
    /// Shots per residual-state measurement; exact amplitudes when `None`.
    pub shots: Option<usize>,
    pub seed: u64,
    pub residual_tol: f64,
    pub max_micro_iter: usize,
    pub max_macro_iter: usize,
}

impl Default for SpqeOptions {
    fn default() -> Self {
        Self {
            omega: 1e-2,
            dt: 1e-3,
            shots: None,
            seed: 0,
            residual_tol: 1e-6,
            max_micro_iter: 500,
            max_macro_iter: 50,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SpqeResult {
    pub energy: f64,
    pub report: ResourceReport,
    pub ansatz: AnsatzState,
    /// Operators added at each macro-iteration (pool indices).
    pub selections: Vec<Vec<usize>>,
}

/// Every particle- and S_z-conserving excitation out of the reference, one
/// per excited determinant, in determinant order.
pub fn full_excitation_pool(system: &MolecularSystem) -> Result<OperatorPool> {
    let reference = system.hf_reference();
    let n = system.n_qubits();
    let alpha = |b: u64| (b & 0x5555_5555_5555_5555).count_ones();
    let excitations = particle_sector(n, system.n_electrons())
        .into_iter()
        .filter(|d| *d != reference && alpha(d.bits()) == alpha(reference.bits()))
        .map(|d| excitation_between(reference, d))
        .collect();
    OperatorPool::from_excitations(system, PoolKind::MaxRank(system.n_electrons()), excitations)
}

fn excitation_between(reference: BasisAddress, det: BasisAddress) -> Excitation {
    let from = BasisAddress(reference.bits() & !det.bits()).occupied();
    let to = BasisAddress(det.bits() & !reference.bits()).occupied();
    Excitation { from, to }
}

/// Squared residual estimates `|r_μ|² = |⟨Φ_μ|r̃⟩|²/Δt²` for every pool entry.
fn residual_weights(
    system: &MolecularSystem,
    pool: &OperatorPool,
    ansatz: &AnsatzState,
    opts: &SpqeOptions,
    salt: u64,
) -> Result<Vec<f64>> {
    let n = system.n_qubits();
    let u = ansatz.circuit()?;
    let evo = trotter_circuit(system.hamiltonian(), &EvolutionSpec::trotter(-opts.dt, 1))?;
    let mut s = StateVector::basis_state(n, ansatz.reference)?;
    s.apply_circuit(&u)?;
    s.apply_circuit(&evo)?;
    s.apply_circuit(&u.adjoint())?;
    let probs: HashMap<u64, f64> = match opts.shots {
        None => pool
            .entries()
            .iter()
            .map(|e| (e.excited.bits(), s.amplitude(e.excited).norm_sqr()))
            .collect(),
        Some(m) => {
            let mut counts: HashMap<u64, f64> = HashMap::new();
            for b in s.sample_basis_states(m, opts.seed.wrapping_add(salt))? {
                *counts.entry(b.bits()).or_default() += 1.0;
            }
            counts.values_mut().for_each(|c| *c /= m as f64);
            counts
        }
    };
    let dt2 = opts.dt * opts.dt;
    Ok(pool
        .entries()
        .iter()
        .map(|e| probs.get(&e.excited.bits()).copied().unwrap_or(0.0) / dt2)
        .collect())
}

/// Indices left after dropping the largest ascending prefix whose
/// cumulative weight stays within `omega²`.
pub fn select_by_cumulative_threshold(weights: &[f64], omega: f64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| weights[a].total_cmp(&weights[b]).then(a.cmp(&b)));
    let budget = omega * omega;
    let mut acc = 0.0;
    let mut cut = 0;
    for &i in &order {
        if acc + weights[i] > budget {
            break;
        }
        acc += weights[i];
        cut += 1;
    }
    let mut kept = order[cut..].to_vec();
    kept.sort_unstable();
    kept
}

pub fn run_spqe(system: &MolecularSystem, opts: &SpqeOptions) -> Result<SpqeResult> {
    if !(opts.dt > 0.0) || !(opts.omega >= 0.0) {
        return Err(Error::InvalidArgument("SPQE needs dt > 0 and omega >= 0".into()));
    }
    if opts.shots == Some(0) {
        return Err(Error::InvalidArgument("shot count must be positive".into()));
    }
    let pool = full_excitation_pool(system)?;
    let mut ansatz = AnsatzState::new(pool.reference);
    let mut report = ResourceReport::default();
    let mut selections = Vec::new();
    let mut energy = ansatz.state(system.n_qubits())?.energy(system.hamiltonian())?;
    report.n_pauli_evaluations += system.n_pauli_strings();
    report.final_energy = energy;
    for macro_iter in 0..opts.max_macro_iter {
        let w = residual_weights(system, &pool, &ansatz, opts, macro_iter as u64)?;
        let added: Vec<usize> = select_by_cumulative_threshold(&w, opts.omega)
            .into_iter()
            .filter(|i| !ansatz.pool_indices.contains(i))
            .collect();
        if added.is_empty() {
            break;
        }
        for &i in &added {
            ansatz.push(&pool, i, 0.0);
        }
        selections.push(added);
        let denominators: Vec<f64> =
            ansatz.pool_indices.iter().map(|&i| pool.entries()[i].denominator).collect();
        let r = solve_residuals(
            system,
            ansatz,
            &denominators,
            opts.residual_tol,
            opts.max_micro_iter,
            &mut report,
        )?;
        ansatz = r.ansatz;
        energy = r.energy;
    }
    report.n_iterations = selections.len();
    report.n_parameters = ansatz.len();
    report.n_cnot = ansatz.n_cnot();
    report.final_energy = energy;
    Ok(SpqeResult { energy, report, ansatz, selections })
}
