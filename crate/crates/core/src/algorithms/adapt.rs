//! ADAPT-VQE: grow the ansatz one pool operator at a time by largest
//! energy gradient.

use serde::Serialize;

use crate::error::Result;
use crate::solvers::Method;
use crate::state::StateVector;
use crate::system::{build_pool, MolecularSystem, OperatorPool, PoolKind};

use super::ucc::{overlap, AnsatzState};
use super::vqe::optimize_ansatz;
use super::ResourceReport;

#[derive(Debug, Clone)]
pub struct AdaptOptions {
    pub pool: PoolKind,
    pub grad_norm_threshold: f64,
    pub max_depth: usize,
    pub method: Method,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for AdaptOptions {
    fn default() -> Self {
        Self {
            pool: PoolKind::SD,
            grad_norm_threshold: 1e-5,
            max_depth: 50,
            method: Method::Bfgs,
            tol: 1e-6,
            max_iter: 1000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AdaptStop {
    GradientConverged,
    MaxDepth,
    /// The operator just added was selected again with a vanishing gradient.
    Stagnation,
}

#[derive(Debug, Clone)]
pub struct AdaptResult {
    pub energy: f64,
    pub report: ResourceReport,
    pub ansatz: AnsatzState,
    pub stop: AdaptStop,
    /// Energy after each macro-iteration, starting with the reference.
    pub energies: Vec<f64>,
    /// Gradient 2-norm seen at each macro-iteration.
    pub gradient_norms: Vec<f64>,
}

pub fn run_adapt_vqe(system: &MolecularSystem, opts: &AdaptOptions) -> Result<AdaptResult> {
    let pool = build_pool(system, opts.pool)?;
    run_adapt_with_pool(system, &pool, opts)
}

/// `g_ν = ⟨ψ|[H, κ_ν]|ψ⟩ = 2 Re⟨Hψ|κ_ν ψ⟩` for every pool entry.
pub fn pool_gradients(
    system: &MolecularSystem,
    pool: &OperatorPool,
    psi: &StateVector,
) -> Result<Vec<f64>> {
    let h_psi = psi.apply_operator(system.hamiltonian())?;
    pool.entries()
        .iter()
        .map(|op| Ok(2.0 * overlap(&h_psi, &psi.apply_operator(&op.qubit_generator)?).re))
        .collect()
}

pub fn run_adapt_with_pool(
    system: &MolecularSystem,
    pool: &OperatorPool,
    opts: &AdaptOptions,
) -> Result<AdaptResult> {
    let n_qubits = system.n_qubits();
    let n_ps = system.n_pauli_strings();
    // Pauli strings measured per gradient sweep.
    let commutator_size: usize = pool
        .entries()
        .iter()
        .map(|op| system.hamiltonian().commutator(&op.qubit_generator).len())
        .sum();

    let mut ansatz = AnsatzState::new(pool.reference);
    let mut report = ResourceReport::default();
    let mut energy = ansatz.state(n_qubits)?.energy(system.hamiltonian())?;
    report.n_pauli_evaluations += n_ps;
    let mut energies = vec![energy];
    let mut gradient_norms = Vec::new();
    let stop = loop {
        let psi = ansatz.state(n_qubits)?;
        let g = pool_gradients(system, pool, &psi)?;
        report.n_gradient_pauli_evaluations += commutator_size;
        let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        gradient_norms.push(norm);
        if norm < opts.grad_norm_threshold {
            break AdaptStop::GradientConverged;
        }
        if ansatz.len() >= opts.max_depth {
            break AdaptStop::MaxDepth;
        }
        let best = (0..g.len()).max_by(|&a, &b| g[a].abs().total_cmp(&g[b].abs())).expect("pool nonempty");
        if ansatz.pool_indices.last() == Some(&best) && g[best].abs() < 1e-8 {
            break AdaptStop::Stagnation;
        }
        ansatz.push(pool, best, 0.0);
        let r = optimize_ansatz(system, ansatz, opts.method, opts.tol, opts.max_iter)?;
        ansatz = r.ansatz;
        energy = r.energy;
        energies.push(energy);
        report.n_pauli_evaluations += r.report.n_pauli_evaluations;
        report.n_gradient_pauli_evaluations += r.report.n_gradient_pauli_evaluations;
        report.n_iterations += 1;
    };
    report.n_parameters = ansatz.len();
    report.n_cnot = ansatz.n_cnot();
    report.final_energy = energy;
    Ok(AdaptResult { energy, report, ansatz, stop, energies, gradient_norms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::fci_oracle;
    use crate::system::Integrals;

    fn toy(scale: f64) -> MolecularSystem {
        let mut ints = Integrals::zeros(2);
        ints.set_h(0, 0, -1.25 * scale);
        ints.set_h(1, 1, -0.48 * scale);
        ints.set_g(0, 0, 0, 0, 0.67 * scale);
        ints.set_g(1, 1, 1, 1, 0.70 * scale);
        ints.set_g(0, 0, 1, 1, 0.66 * scale);
        ints.set_g(0, 1, 0, 1, 0.18 * scale);
        MolecularSystem::from_integrals(ints, 2, 0, 0.71 * scale, None).unwrap()
    }

    #[test]
    fn converges_on_two_electrons() {
        let sys = toy(1.0);
        let fci = fci_oracle(sys.hamiltonian(), 4, Some(2)).unwrap();
        let r = run_adapt_vqe(&sys, &AdaptOptions::default()).unwrap();
        assert!((r.energy - fci.energy).abs() < 1e-8);
        assert!(r.report.n_iterations <= 3);
        assert_eq!(r.stop, AdaptStop::GradientConverged);
    }

    #[test]
    fn huge_threshold_stops_at_reference() {
        let sys = toy(1.0);
        let opts = AdaptOptions { grad_norm_threshold: 1e9, ..Default::default() };
        let r = run_adapt_vqe(&sys, &opts).unwrap();
        assert_eq!(r.report.n_iterations, 0);
        assert!((r.energy - sys.hf_energy()).abs() < 1e-12);
    }

    #[test]
    fn gradients_scale_with_hamiltonian() {
        let (a, b) = (toy(1.0), toy(2.5));
        let pool_a = build_pool(&a, PoolKind::SD).unwrap();
        let pool_b = build_pool(&b, PoolKind::SD).unwrap();
        let ga = pool_gradients(&a, &pool_a, &a.reference_state().unwrap()).unwrap();
        let gb = pool_gradients(&b, &pool_b, &b.reference_state().unwrap()).unwrap();
        for (x, y) in ga.iter().zip(&gb) {
            assert!((2.5 * x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn gradient_matches_finite_difference() {
        let sys = toy(1.0);
        let pool = build_pool(&sys, PoolKind::SD).unwrap();
        let mut base = AnsatzState::from_pool(&pool, &[0]);
        base.amplitudes[0] = 0.05;
        let g = pool_gradients(&sys, &pool, &base.state(4).unwrap()).unwrap();
        for nu in 0..pool.len() {
            let mut a = base.clone();
            a.push(&pool, nu, 0.0);
            let e = |t: f64| {
                let mut x = a.amplitudes.clone();
                *x.last_mut().unwrap() = t;
                a.state_with(4, &x).unwrap().energy(sys.hamiltonian()).unwrap()
            };
            let fd = (e(1e-5) - e(-1e-5)) / 2e-5;
            assert!((fd - g[nu]).abs() < 1e-6, "{nu}: {fd} vs {}", g[nu]);
        }
    }
}
