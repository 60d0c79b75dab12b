//! Disentangled UCC circuits and energy evaluation.

use num_complex::Complex64;

use crate::basis::BasisAddress;
use crate::circuit::Circuit;
use crate::error::Result;
use crate::exponentiate::exponentiate_pauli_string;
use crate::pauli::QubitOperator;
use crate::state::StateVector;
use crate::system::{Excitation, MolecularSystem, OperatorPool};

/// `U(t)|Φ₀⟩ = ∏_μ e^{t_μ κ_μ}|Φ₀⟩`; the first selected operator acts first.
#[derive(Debug, Clone, Default)]
pub struct AnsatzState {
    pub reference: BasisAddress,
    pub pool_indices: Vec<usize>,
    pub amplitudes: Vec<f64>,
    pub excitations: Vec<Excitation>,
    /// Jordan–Wigner images of the selected generators.
    pub generators: Vec<QubitOperator>,
}

impl AnsatzState {
    pub fn new(reference: BasisAddress) -> Self {
        Self { reference, ..Default::default() }
    }

    /// Ansatz over the given pool entries with zero amplitudes.
    pub fn from_pool(pool: &OperatorPool, indices: &[usize]) -> Self {
        let mut a = Self::new(pool.reference);
        for &i in indices {
            a.push(pool, i, 0.0);
        }
        a
    }

    pub fn push(&mut self, pool: &OperatorPool, index: usize, amplitude: f64) {
        let op = &pool.entries()[index];
        self.pool_indices.push(index);
        self.amplitudes.push(amplitude);
        self.excitations.push(op.excitation.clone());
        self.generators.push(op.qubit_generator.clone());
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    /// Circuit for `U(t)` with the given amplitudes (reference preparation excluded).
    pub fn circuit_with(&self, amplitudes: &[f64]) -> Result<Circuit> {
        let mut c = Circuit::new();
        for (t, gen) in amplitudes.iter().zip(&self.generators) {
            for (coef, s) in gen.terms() {
                let (circ, phase) = exponentiate_pauli_string(coef * *t, s)?;
                c.add_circuit(&circ.with_global_phase(phase));
            }
        }
        Ok(c)
    }

    pub fn circuit(&self) -> Result<Circuit> {
        self.circuit_with(&self.amplitudes)
    }

    /// CNOTs in `U(t)`; independent of the amplitudes.
    pub fn n_cnot(&self) -> usize {
        self.generators
            .iter()
            .flat_map(|g| g.terms())
            .filter(|(_, s)| !s.is_identity())
            .map(|(_, s)| 2 * (s.weight() - 1))
            .sum()
    }

    /// Prepares `U(t)|Φ₀⟩` on `n_qubits` qubits.
    pub fn state_with(&self, n_qubits: usize, amplitudes: &[f64]) -> Result<StateVector> {
        let mut s = StateVector::basis_state(n_qubits, self.reference)?;
        s.apply_circuit(&self.circuit_with(amplitudes)?)?;
        Ok(s)
    }

    pub fn state(&self, n_qubits: usize) -> Result<StateVector> {
        self.state_with(n_qubits, &self.amplitudes)
    }
}

/// Energy of an ansatz with bookkeeping of Pauli-string evaluations.
pub struct EnergyEvaluator<'a> {
    pub system: &'a MolecularSystem,
    pub ansatz: &'a AnsatzState,
    pub n_energy_calls: usize,
    pub n_gradient_energy_calls: usize,
    pub fd_step: f64,
    pub error: Option<crate::error::Error>,
}

impl<'a> EnergyEvaluator<'a> {
    pub fn new(system: &'a MolecularSystem, ansatz: &'a AnsatzState) -> Self {
        Self {
            system,
            ansatz,
            n_energy_calls: 0,
            n_gradient_energy_calls: 0,
            fd_step: 1e-6,
            error: None,
        }
    }

    pub fn energy(&self, t: &[f64]) -> Result<f64> {
        self.ansatz.state_with(self.system.n_qubits(), t)?.energy(self.system.hamiltonian())
    }

    fn checked(&mut self, t: &[f64]) -> f64 {
        match self.energy(t) {
            Ok(e) => e,
            Err(e) => {
                self.error.get_or_insert(e);
                f64::NAN
            }
        }
    }
}

impl crate::solvers::Objective for EnergyEvaluator<'_> {
    fn value(&mut self, x: &[f64]) -> f64 {
        self.n_energy_calls += 1;
        self.checked(x)
    }

    /// Central finite differences, counted as gradient work.
    fn gradient(&mut self, x: &[f64]) -> Option<Vec<f64>> {
        let h = self.fd_step;
        let mut probe = x.to_vec();
        let mut g = Vec::with_capacity(x.len());
        for i in 0..x.len() {
            probe[i] = x[i] + h;
            let up = self.checked(&probe);
            probe[i] = x[i] - h;
            let down = self.checked(&probe);
            probe[i] = x[i];
            g.push((up - down) / (2.0 * h));
        }
        self.n_gradient_energy_calls += 2 * x.len();
        Some(g)
    }
}

/// `⟨a|b⟩` without the `Result` (both states share a register).
pub(crate) fn overlap(a: &StateVector, b: &StateVector) -> Complex64 {
    a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| x.conj() * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::{build_pool, Integrals, PoolKind};

    fn toy() -> MolecularSystem {
        let mut ints = Integrals::zeros(2);
        ints.set_h(0, 0, -1.2);
        ints.set_h(1, 1, -0.3);
        ints.set_g(0, 0, 0, 0, 0.6);
        ints.set_g(1, 1, 1, 1, 0.6);
        ints.set_g(0, 0, 1, 1, 0.5);
        ints.set_g(0, 1, 0, 1, 0.2);
        MolecularSystem::from_integrals(ints, 2, 0, 0.3, None).unwrap()
    }

    #[test]
    fn zero_amplitudes_give_reference() {
        let sys = toy();
        let pool = build_pool(&sys, PoolKind::SD).unwrap();
        let a = AnsatzState::from_pool(&pool, &(0..pool.len()).collect::<Vec<_>>());
        let s = a.state(4).unwrap();
        assert!((s.amplitude(sys.hf_reference()).re - 1.0).abs() < 1e-14);
        assert_eq!(a.n_cnot(), a.circuit().unwrap().n_cnot());
    }

    #[test]
    fn single_generator_rotates_into_excited_determinant() {
        let sys = toy();
        let pool = build_pool(&sys, PoolKind::SD).unwrap();
        let d = pool.entries().iter().position(|e| e.excitation.rank() == 2).unwrap();
        let mut a = AnsatzState::from_pool(&pool, &[d]);
        a.amplitudes[0] = 0.3;
        let s = a.state(4).unwrap();
        assert!((s.amplitude(sys.hf_reference()).norm() - 0.3f64.cos()).abs() < 1e-12);
        assert!((s.amplitude(pool.entries()[d].excited).norm() - 0.3f64.sin()).abs() < 1e-12);
    }
}
