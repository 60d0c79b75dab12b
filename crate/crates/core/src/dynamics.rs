//! Real-time evolution: first-order Trotter circuits, exact propagation,
//! controlled evolution and ancilla-based matrix elements.

use num_complex::Complex64;

use crate::circuit::Circuit;
use crate::dense::{qubit_operator_matrix, DENSE_QUBIT_CAP};
use crate::error::{Error, Result};
use crate::exponentiate::exponentiate_pauli_string;
use crate::gate::{Gate, GateKind};
use crate::pauli::{Pauli, PauliString, QubitOperator};
use crate::solvers::hermitian_eigen;
use crate::state::StateVector;

/// Order in which Hamiltonian terms are exponentiated within a Trotter step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TermOrder {
    /// Descending `|h_ℓ|`, ties broken by Pauli-string order.
    #[default]
    MagnitudeDescending,
    /// Order of the simplified operator.
    AsGiven,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionSpec {
    pub time: f64,
    pub trotter_steps: usize,
    pub ordering: TermOrder,
    pub exact: bool,
}

impl EvolutionSpec {
    pub fn trotter(time: f64, trotter_steps: usize) -> Self {
        Self { time, trotter_steps, ordering: TermOrder::default(), exact: false }
    }

    pub fn exact(time: f64) -> Self {
        Self { time, trotter_steps: 0, ordering: TermOrder::default(), exact: true }
    }
}

/// Real coefficients of a Hermitian operator's terms in the requested order.
pub fn ordered_terms(h: &QubitOperator, ordering: TermOrder) -> Result<Vec<(f64, PauliString)>> {
    let h = h.simplify();
    if !h.is_hermitian(1e-12) {
        return Err(Error::InvalidOperator("evolution requires a Hermitian operator".into()));
    }
    let mut terms: Vec<(f64, PauliString)> = h.terms().iter().map(|(c, s)| (c.re, *s)).collect();
    if ordering == TermOrder::MagnitudeDescending {
        terms.sort_by(|a, b| b.0.abs().total_cmp(&a.0.abs()).then_with(|| a.1.cmp(&b.1)));
    }
    Ok(terms)
}

/// `(∏_ℓ e^{−i t h_ℓ P_ℓ / r})^r` as a circuit. The identity term does not
/// produce gates; its phase `e^{−i t h_I}` is carried as the circuit's
/// global phase.
pub fn trotter_circuit(h: &QubitOperator, spec: &EvolutionSpec) -> Result<Circuit> {
    if spec.exact {
        return Err(Error::InvalidArgument("exact evolution has no circuit".into()));
    }
    if spec.trotter_steps == 0 {
        return Err(Error::InvalidArgument("at least one Trotter step is required".into()));
    }
    let terms = ordered_terms(h, spec.ordering)?;
    let r = spec.trotter_steps as f64;
    let mut step = Circuit::new();
    for (c, s) in &terms {
        let factor = Complex64::new(0.0, -spec.time * c / r);
        let (circ, phase) = exponentiate_pauli_string(factor, s)?;
        step.add_circuit(&circ.with_global_phase(phase));
    }
    let mut out = Circuit::new();
    for _ in 0..spec.trotter_steps {
        out.add_circuit(&step);
    }
    Ok(out)
}

/// Trotter circuit with every `Rz` controlled on `ancilla` and the identity
/// phase applied as a phase gate on the ancilla. With the ancilla in `|1⟩`
/// this is exactly the uncontrolled evolution (global phase included); with
/// it in `|0⟩` the basis changes and CNOT ladders cancel pairwise.
pub fn controlled_evolution_circuit(
    h: &QubitOperator,
    spec: &EvolutionSpec,
    ancilla: usize,
) -> Result<Circuit> {
    if let Some(q) = h.max_qubit() {
        if ancilla <= q {
            return Err(Error::InvalidArgument(format!(
                "ancilla {ancilla} lies inside the system register (0..={q})"
            )));
        }
    }
    let u = trotter_circuit(h, spec)?;
    let mut out = Circuit::new();
    for g in u.gates() {
        if g.kind() == GateKind::Rz {
            out.add_gate(g.controlled_by(ancilla)?);
        } else {
            out.add_gate(g.clone());
        }
    }
    let arg = u.global_phase().arg();
    if arg != 0.0 {
        out.add_gate(Gate::rotation(GateKind::R, ancilla, arg));
    }
    Ok(out)
}

/// `state ← e^{−itH} state` by a scaled Taylor series applied to the vector.
pub fn exact_evolve(h: &QubitOperator, t: f64, state: &mut StateVector) -> Result<()> {
    if state.n_qubits() > DENSE_QUBIT_CAP {
        return Err(Error::Capacity(format!(
            "exact evolution is limited to {DENSE_QUBIT_CAP} qubits"
        )));
    }
    if t == 0.0 {
        return Ok(());
    }
    let norm = h.one_norm() * t.abs();
    let n_steps = norm.ceil().max(1.0) as usize;
    let tau = Complex64::new(0.0, -t / n_steps as f64);
    for _ in 0..n_steps {
        let mut term = state.clone();
        let mut acc = state.clone();
        for k in 1..64 {
            let mut next = term.apply_operator(h)?;
            next.scale(tau / k as f64);
            let size = next.norm_sqr().sqrt();
            for (a, b) in acc.amplitudes_mut().iter_mut().zip(next.amplitudes()) {
                *a += b;
            }
            term = next;
            if size < 1e-17 {
                break;
            }
        }
        *state = acc;
    }
    Ok(())
}

/// Exact propagator from a dense eigen-decomposition; cheap to apply for
/// many times once built.
#[derive(Debug, Clone)]
pub struct SpectralPropagator {
    n_qubits: usize,
    energies: Vec<f64>,
    vectors: nalgebra::DMatrix<Complex64>,
}

impl SpectralPropagator {
    pub fn new(h: &QubitOperator, n_qubits: usize) -> Result<Self> {
        if !h.is_hermitian(1e-12) {
            return Err(Error::InvalidOperator("propagator requires a Hermitian operator".into()));
        }
        let (energies, vectors) = hermitian_eigen(&qubit_operator_matrix(h, n_qubits)?);
        Ok(Self { n_qubits, energies, vectors })
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// `e^{−itH}` applied to the system register (qubits `0..n`) of `state`,
    /// conditioned on all qubits in `control_mask` being set.
    pub fn apply(&self, t: f64, state: &mut StateVector, control_mask: u64) -> Result<()> {
        let n = self.n_qubits;
        if state.n_qubits() < n || control_mask & ((1u64 << n) - 1) != 0 {
            return Err(Error::InvalidArgument("propagator register mismatch".into()));
        }
        let dim = 1usize << n;
        let phases: Vec<Complex64> =
            self.energies.iter().map(|e| Complex64::from_polar(1.0, -t * e)).collect();
        let v = &self.vectors;
        let amps = state.amplitudes_mut();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); dim];
        for (block_index, block) in amps.chunks_mut(dim).enumerate() {
            let high = (block_index as u64) << n;
            if high & control_mask != control_mask {
                continue;
            }
            for (k, c) in coeffs.iter_mut().enumerate() {
                let proj: Complex64 = (0..dim).map(|i| v[(i, k)].conj() * block[i]).sum();
                *c = proj * phases[k];
            }
            for (i, a) in block.iter_mut().enumerate() {
                *a = (0..dim).map(|k| v[(i, k)] * coeffs[k]).sum();
            }
        }
        Ok(())
    }
}

/// How [`matrix_element`] reads out a transition amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementMethod {
    /// Statevector inner product.
    Direct,
    /// Ancilla interference circuit with exact `⟨X⟩ + i⟨Y⟩` readout.
    HadamardTest,
    /// Hadamard test with `shots` samples per ancilla observable.
    SampledHadamardTest { shots: usize, seed: u64 },
}

/// `⟨0|B† Ô K|0⟩` for preparation circuits `B`, `K` on `n_qubits` qubits;
/// `Ô` defaults to the identity.
pub fn matrix_element(
    bra_prep: &Circuit,
    ket_prep: &Circuit,
    op: Option<&QubitOperator>,
    n_qubits: usize,
    method: ElementMethod,
) -> Result<Complex64> {
    for c in [bra_prep, ket_prep] {
        if let Some(q) = c.max_qubit() {
            if q >= n_qubits {
                return Err(Error::QubitOutOfRange { index: q, n_qubits });
            }
        }
    }
    if let Some(q) = op.and_then(QubitOperator::max_qubit) {
        if q >= n_qubits {
            return Err(Error::QubitOutOfRange { index: q, n_qubits });
        }
    }
    let identity = QubitOperator::identity(1.0);
    let op = op.unwrap_or(&identity);
    match method {
        ElementMethod::Direct => {
            let mut bra = StateVector::new(n_qubits)?;
            bra.apply_circuit(bra_prep)?;
            let mut ket = StateVector::new(n_qubits)?;
            ket.apply_circuit(ket_prep)?;
            bra.inner(&ket.apply_operator(op)?)
        }
        ElementMethod::HadamardTest => hadamard_sum(bra_prep, ket_prep, op, n_qubits, None),
        ElementMethod::SampledHadamardTest { shots, seed } => {
            hadamard_sum(bra_prep, ket_prep, op, n_qubits, Some((shots, seed)))
        }
    }
}

fn hadamard_sum(
    bra_prep: &Circuit,
    ket_prep: &Circuit,
    op: &QubitOperator,
    n_qubits: usize,
    shots: Option<(usize, u64)>,
) -> Result<Complex64> {
    let anc = n_qubits;
    let ket_c = ket_prep.controlled_by(anc)?;
    let bra_c = bra_prep.adjoint().controlled_by(anc)?;
    let x_anc = QubitOperator::from_terms(vec![(
        Complex64::new(1.0, 0.0),
        PauliString::single(anc, Pauli::X),
    )]);
    let y_anc = QubitOperator::from_terms(vec![(
        Complex64::new(1.0, 0.0),
        PauliString::single(anc, Pauli::Y),
    )]);
    let mut total = Complex64::new(0.0, 0.0);
    for (i, (c, p)) in op.terms().iter().enumerate() {
        let mut circ = Circuit::new();
        circ.add_gate(Gate::single(GateKind::H, anc));
        circ.add_circuit(&ket_c);
        for (q, axis) in p.factors() {
            let kind = match axis {
                Pauli::X => GateKind::X,
                Pauli::Y => GateKind::Y,
                Pauli::Z => GateKind::Z,
            };
            circ.add_gate(Gate::single(kind, q).controlled_by(anc)?);
        }
        circ.add_circuit(&bra_c);
        let mut s = StateVector::new(n_qubits + 1)?;
        s.apply_circuit(&circ)?;
        let (re, im) = match shots {
            None => (s.expectation(&x_anc)?.re, s.expectation(&y_anc)?.re),
            Some((n, seed)) => {
                let seed = seed.wrapping_add(2 * i as u64);
                (s.measure(&x_anc, n, seed)?.re, s.measure(&y_anc, n, seed.wrapping_add(1))?.re)
            }
        };
        total += c * Complex64::new(re, im);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{circuit_unitary, expm, max_abs_diff, operator_matrix};

    fn op(terms: &[(f64, &[(usize, Pauli)])]) -> QubitOperator {
        QubitOperator::from_terms(
            terms
                .iter()
                .map(|(c, f)| (Complex64::new(*c, 0.0), PauliString::new(f).unwrap()))
                .collect(),
        )
    }

    #[test]
    fn single_term_trotter_is_exact() {
        let h = op(&[(0.7, &[(0, Pauli::Z)]), (0.3, &[])]);
        let c = trotter_circuit(&h, &EvolutionSpec::trotter(1.3, 3)).unwrap();
        let exact = expm(&(operator_matrix(&h, 1) * Complex64::new(0.0, -1.3)));
        assert!(max_abs_diff(&circuit_unitary(&c, 1), &exact) < 1e-12);
    }

    #[test]
    fn ordering_is_by_magnitude() {
        let h = op(&[(0.1, &[(0, Pauli::X)]), (-0.5, &[(0, Pauli::Z)]), (0.1, &[(0, Pauli::Y)])]);
        let t = ordered_terms(&h, TermOrder::MagnitudeDescending).unwrap();
        assert_eq!(t[0].0, -0.5);
        assert!(t[1].1 < t[2].1);
    }

    #[test]
    fn non_hermitian_rejected() {
        let h = QubitOperator::from_terms(vec![(
            Complex64::new(0.0, 1.0),
            PauliString::single(0, Pauli::X),
        )]);
        assert!(trotter_circuit(&h, &EvolutionSpec::trotter(1.0, 1)).is_err());
    }

    #[test]
    fn exact_evolve_matches_expm() {
        let h = op(&[(0.8, &[(0, Pauli::X), (1, Pauli::X)]), (-0.4, &[(1, Pauli::Z)]), (0.2, &[])]);
        let mut s = StateVector::new(2).unwrap();
        s.apply_gate(&Gate::single(GateKind::H, 0)).unwrap();
        let before = s.clone();
        exact_evolve(&h, 2.5, &mut s).unwrap();
        let u = expm(&(operator_matrix(&h, 2) * Complex64::new(0.0, -2.5)));
        let v = u * nalgebra::DVector::from_column_slice(before.amplitudes());
        for (a, b) in s.amplitudes().iter().zip(v.iter()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn controlled_evolution_acts_on_one_branch() {
        let h = op(&[(0.6, &[(0, Pauli::X), (1, Pauli::Y)]), (-0.3, &[(0, Pauli::Z)]), (0.45, &[])]);
        let spec = EvolutionSpec::trotter(0.9, 2);
        let cu = controlled_evolution_circuit(&h, &spec, 2).unwrap();
        let u = trotter_circuit(&h, &spec).unwrap();
        let full = circuit_unitary(&cu, 3);
        let sys = circuit_unitary(&u, 2);
        for i in 0..4 {
            for j in 0..4 {
                let off = if i == j { 1.0 } else { 0.0 };
                assert!((full[(i, j)] - Complex64::new(off, 0.0)).norm() < 1e-12);
                assert!((full[(i + 4, j + 4)] - sys[(i, j)]).norm() < 1e-12);
            }
        }
        assert!(controlled_evolution_circuit(&h, &spec, 1).is_err());
    }

    #[test]
    fn hadamard_test_matches_direct() {
        let h = op(&[(0.6, &[(0, Pauli::X), (1, Pauli::Y)]), (-0.3, &[(0, Pauli::Z)]), (0.45, &[])]);
        let mut bra = Circuit::new();
        bra.add_gate(Gate::single(GateKind::H, 0));
        let mut ket = trotter_circuit(&h, &EvolutionSpec::trotter(0.7, 1)).unwrap();
        ket.add_gate(Gate::rotation(GateKind::Ry, 1, 0.3));
        let d = matrix_element(&bra, &ket, Some(&h), 2, ElementMethod::Direct).unwrap();
        let t = matrix_element(&bra, &ket, Some(&h), 2, ElementMethod::HadamardTest).unwrap();
        assert!((d - t).norm() < 1e-12);
        let s = matrix_element(&bra, &bra, None, 2, ElementMethod::HadamardTest).unwrap();
        assert!((s - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn spectral_propagator_matches_taylor() {
        let h = op(&[(0.5, &[(0, Pauli::X)]), (0.25, &[(0, Pauli::Z), (1, Pauli::Z)])]);
        let prop = SpectralPropagator::new(&h, 2).unwrap();
        let mut a = StateVector::new(3).unwrap();
        a.apply_gate(&Gate::single(GateKind::H, 2)).unwrap();
        a.apply_gate(&Gate::single(GateKind::H, 1)).unwrap();
        let mut b = a.clone();
        prop.apply(1.7, &mut a, 1 << 2).unwrap();
        // Evolve only the |1⟩ ancilla half by hand.
        let half = StateVector::from_amplitudes(b.amplitudes()[4..].to_vec()).unwrap();
        let mut evolved = half.clone();
        exact_evolve(&h, 1.7, &mut evolved).unwrap();
        b.amplitudes_mut()[4..].copy_from_slice(evolved.amplitudes());
        for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
            assert!((x - y).norm() < 1e-12);
        }
    }
}
