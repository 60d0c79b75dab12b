//! Dense state-vector simulator.
//!
//! Amplitude `k` belongs to the basis state whose [`BasisAddress`] is `k`
//! (qubit 0 is the least significant bit). Gate kernels walk the vector in
//! strided blocks of `2^target` amplitudes: within each block of size
//! `2^(target+1)` the low half has the target bit clear and the high half has
//! it set, so single-qubit gates act on contiguous slice pairs.
//!
//! Sampling uses ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded from a 64-bit
//! seed with `SeedableRng::seed_from_u64`, drawing one `f64` in `[0, 1)` per
//! shot and inverting the cumulative Born distribution.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::basis::BasisAddress;
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gate::{Action, Gate, GateKind, Y_BASIS_ANGLE};
use crate::pauli::{Pauli, PauliString, QubitOperator};

/// Default ceiling on the number of amplitudes a state may allocate.
pub const DEFAULT_MAX_AMPLITUDES: usize = 1 << 26;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩` on `n_qubits` qubits, capped at [`DEFAULT_MAX_AMPLITUDES`].
    pub fn new(n_qubits: usize) -> Result<Self> {
        Self::with_cap(n_qubits, DEFAULT_MAX_AMPLITUDES)
    }

    pub fn with_cap(n_qubits: usize, max_amplitudes: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::Capacity("a computer needs at least one qubit".into()));
        }
        if n_qubits >= usize::BITS as usize || (1usize << n_qubits) > max_amplitudes {
            return Err(Error::Capacity(format!(
                "{n_qubits} qubits exceed the cap of {max_amplitudes} amplitudes"
            )));
        }
        let mut amplitudes = vec![ZERO; 1 << n_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amplitudes })
    }

    /// Computational basis state `address`.
    pub fn basis_state(n_qubits: usize, address: BasisAddress) -> Result<Self> {
        let mut s = Self::new(n_qubits)?;
        if address.bits() >> n_qubits != 0 {
            return Err(Error::InvalidArgument(format!(
                "address {} has bits beyond {n_qubits} qubits",
                address.bits()
            )));
        }
        s.amplitudes[0] = ZERO;
        s.amplitudes[address.index()] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    /// Wraps raw amplitudes; the length must be a power of two ≥ 2.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "amplitude count {len} is not a power of two ≥ 2"
            )));
        }
        Ok(Self { n_qubits: len.trailing_zeros() as usize, amplitudes })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn amplitude(&self, address: BasisAddress) -> Complex64 {
        self.amplitudes.get(address.index()).copied().unwrap_or(ZERO)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn normalize(&mut self) {
        let n = self.norm_sqr().sqrt();
        if n > 0.0 {
            self.scale(Complex64::new(1.0 / n, 0.0));
        }
    }

    pub fn scale(&mut self, factor: Complex64) {
        self.amplitudes.iter_mut().for_each(|a| *a *= factor);
    }

    /// True if the state is exactly `|0…0⟩`.
    pub fn is_zero_state(&self) -> bool {
        self.amplitudes[0] == Complex64::new(1.0, 0.0)
            && self.amplitudes[1..].iter().all(|a| *a == ZERO)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::InvalidArgument(format!(
                "register widths differ: {} vs {}",
                self.n_qubits, other.n_qubits
            )));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n_qubits {
            return Err(Error::QubitOutOfRange { index: q, n_qubits: self.n_qubits });
        }
        Ok(())
    }

    fn check_gate(&self, gate: &Gate) -> Result<()> {
        self.check_qubit(gate.max_qubit())
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        self.check_gate(gate)?;
        self.apply_gate_unchecked(gate);
        Ok(())
    }

    /// Applies every gate in order. All indices are validated before the
    /// first amplitude changes.
    pub fn apply_circuit(&mut self, circuit: &Circuit) -> Result<()> {
        if let Some(q) = circuit.max_qubit() {
            self.check_qubit(q)?;
        }
        for g in circuit.gates() {
            self.apply_gate_unchecked(g);
        }
        let phase = circuit.global_phase();
        if phase != Complex64::new(1.0, 0.0) {
            self.scale(phase);
        }
        Ok(())
    }

    fn apply_gate_unchecked(&mut self, gate: &Gate) {
        let controls = gate.control_mask();
        let target = gate.target();
        match gate.action() {
            Action::Flip if controls == 0 => kernels::flip(&mut self.amplitudes, target),
            Action::Flip => kernels::controlled_flip(&mut self.amplitudes, target, controls),
            Action::Diagonal(d0, d1) => {
                kernels::diagonal(&mut self.amplitudes, target, controls, d0, d1)
            }
            Action::Dense(m) => kernels::dense(&mut self.amplitudes, target, controls, &m),
            Action::Swap => {
                let other = gate.control().expect("SWAP carries a second qubit");
                kernels::swap(&mut self.amplitudes, target, other, controls)
            }
        }
    }

    /// Reference 2x2-matrix kernel for any single-qubit gate, bypassing the
    /// specialized paths. Used to cross-check the fast kernels.
    pub fn apply_gate_generic(&mut self, gate: &Gate) -> Result<()> {
        self.check_gate(gate)?;
        if gate.kind() == GateKind::Swap {
            return self.apply_gate(gate);
        }
        let m = gate.matrix();
        let m = [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]];
        kernels::dense(&mut self.amplitudes, gate.target(), gate.control_mask(), &m);
        Ok(())
    }

    fn check_operator(&self, op: &QubitOperator) -> Result<()> {
        match op.max_qubit() {
            Some(q) => self.check_qubit(q),
            None => Ok(()),
        }
    }

    /// `⟨ψ|P|ψ⟩` for a single Pauli string.
    pub fn pauli_expectation(&self, string: &PauliString) -> Complex64 {
        let flip = string.x_mask() as usize;
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(b, &amp)| {
                if amp == ZERO {
                    return ZERO;
                }
                let (phase, _) = string.apply_to_basis(b as u64);
                self.amplitudes[b ^ flip].conj() * phase * amp
            })
            .sum()
    }

    /// Exact `Σ_ℓ u_ℓ ⟨ψ|P_ℓ|ψ⟩`.
    pub fn expectation(&self, op: &QubitOperator) -> Result<Complex64> {
        self.check_operator(op)?;
        Ok(op.terms().iter().map(|(c, s)| c * self.pauli_expectation(s)).sum())
    }

    /// Real part of [`expectation`](Self::expectation), for Hermitian operators.
    pub fn energy(&self, op: &QubitOperator) -> Result<f64> {
        Ok(self.expectation(op)?.re)
    }

    /// `O|ψ⟩` for an arbitrary (possibly non-unitary) operator.
    pub fn apply_operator(&self, op: &QubitOperator) -> Result<StateVector> {
        self.check_operator(op)?;
        let mut out = vec![ZERO; self.dim()];
        for (c, s) in op.terms() {
            for (b, &amp) in self.amplitudes.iter().enumerate() {
                if amp == ZERO {
                    continue;
                }
                let (phase, b2) = s.apply_to_basis(b as u64);
                out[b2 as usize] += c * phase * amp;
            }
        }
        Ok(Self { n_qubits: self.n_qubits, amplitudes: out })
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(Complex64::norm_sqr).collect()
    }

    /// Draws `n_shots` basis states from the Born distribution.
    pub fn sample_basis_states(&self, n_shots: usize, seed: u64) -> Result<Vec<BasisAddress>> {
        if n_shots == 0 {
            return Err(Error::InvalidArgument("n_shots must be at least 1".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sampler = Sampler::new(&self.probabilities());
        Ok((0..n_shots).map(|_| BasisAddress(sampler.draw(&mut rng) as u64)).collect())
    }

    /// Shot-based estimate of `⟨ψ|O|ψ⟩`. Each non-identity term is measured
    /// independently: the state is rotated into the term's eigenbasis, then
    /// `n_shots` parities are sampled. Identity terms contribute exactly.
    pub fn measure(&self, op: &QubitOperator, n_shots: usize, seed: u64) -> Result<Complex64> {
        if n_shots == 0 {
            return Err(Error::InvalidArgument("n_shots must be at least 1".into()));
        }
        self.check_operator(op)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut total = ZERO;
        for (c, s) in op.terms() {
            if s.is_identity() {
                total += c;
                continue;
            }
            let mut rotated = self.clone();
            for (q, p) in s.factors() {
                match p {
                    Pauli::X => rotated.apply_gate_unchecked(&Gate::single(GateKind::H, q)),
                    Pauli::Y => rotated
                        .apply_gate_unchecked(&Gate::rotation(GateKind::Rx, q, Y_BASIS_ANGLE)),
                    Pauli::Z => {}
                }
            }
            let sampler = Sampler::new(&rotated.probabilities());
            let support = s.support();
            let mut sum = 0i64;
            for _ in 0..n_shots {
                let b = sampler.draw(&mut rng) as u64;
                sum += if (b & support).count_ones() % 2 == 0 { 1 } else { -1 };
            }
            total += c * (sum as f64 / n_shots as f64);
        }
        Ok(total)
    }
}

/// Inverse-CDF sampler over a discrete distribution.
pub(crate) struct Sampler {
    cumulative: Vec<f64>,
}

impl Sampler {
    pub(crate) fn new(probabilities: &[f64]) -> Self {
        let mut acc = 0.0;
        let cumulative = probabilities
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        Self { cumulative }
    }

    pub(crate) fn draw(&self, rng: &mut ChaCha8Rng) -> usize {
        let total = *self.cumulative.last().expect("nonempty distribution");
        let u: f64 = rng.gen::<f64>() * total;
        let idx = self.cumulative.partition_point(|&c| c <= u);
        // Skip zero-probability entries at the upper edge.
        let mut idx = idx.min(self.cumulative.len() - 1);
        while idx > 0 && self.cumulative[idx] == self.cumulative[idx - 1] {
            idx -= 1;
        }
        idx
    }
}

mod kernels {
    use num_complex::Complex64;

    /// Uncontrolled X: swap the low and high halves of every block.
    pub(super) fn flip(amps: &mut [Complex64], target: usize) {
        let stride = 1usize << target;
        for block in amps.chunks_exact_mut(2 * stride) {
            let (lo, hi) = block.split_at_mut(stride);
            lo.swap_with_slice(hi);
        }
    }

    pub(super) fn controlled_flip(amps: &mut [Complex64], target: usize, controls: u64) {
        let stride = 1usize << target;
        let mask = controls as usize;
        for (k, block) in amps.chunks_exact_mut(2 * stride).enumerate() {
            let base = k * 2 * stride;
            let (lo, hi) = block.split_at_mut(stride);
            for i in 0..stride {
                if (base + i) & mask == mask {
                    std::mem::swap(&mut lo[i], &mut hi[i]);
                }
            }
        }
    }

    pub(super) fn diagonal(
        amps: &mut [Complex64],
        target: usize,
        controls: u64,
        d0: Complex64,
        d1: Complex64,
    ) {
        let bit = 1usize << target;
        let mask = controls as usize;
        let one = Complex64::new(1.0, 0.0);
        if mask == 0 {
            for block in amps.chunks_exact_mut(2 * bit) {
                let (lo, hi) = block.split_at_mut(bit);
                if d0 != one {
                    lo.iter_mut().for_each(|a| *a *= d0);
                }
                hi.iter_mut().for_each(|a| *a *= d1);
            }
            return;
        }
        for (i, a) in amps.iter_mut().enumerate() {
            if i & mask == mask {
                *a *= if i & bit == 0 { d0 } else { d1 };
            }
        }
    }

    pub(super) fn dense(amps: &mut [Complex64], target: usize, controls: u64, m: &[[Complex64; 2]; 2]) {
        let stride = 1usize << target;
        let mask = controls as usize;
        for (k, block) in amps.chunks_exact_mut(2 * stride).enumerate() {
            let base = k * 2 * stride;
            let (lo, hi) = block.split_at_mut(stride);
            for i in 0..stride {
                if (base + i) & mask != mask {
                    continue;
                }
                let a0 = lo[i];
                let a1 = hi[i];
                lo[i] = m[0][0] * a0 + m[0][1] * a1;
                hi[i] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    pub(super) fn swap(amps: &mut [Complex64], a: usize, b: usize, controls: u64) {
        let (ba, bb) = (1usize << a, 1usize << b);
        let mask = controls as usize;
        for i in 0..amps.len() {
            // Visit each exchanged pair once, from the side with bit a set.
            if i & ba != 0 && i & bb == 0 && i & mask == mask {
                amps.swap(i, i ^ ba ^ bb);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn new_computer_is_zero_state() {
        let s = StateVector::new(2).unwrap();
        assert_eq!(s.amplitudes(), &[c(1.0), c(0.0), c(0.0), c(0.0)]);
        let s4 = StateVector::new(4).unwrap();
        assert_eq!(s4.dim(), 16);
        assert!(s4.is_zero_state());
    }

    #[test]
    fn zero_qubits_and_oversize_rejected() {
        assert!(matches!(StateVector::new(0), Err(Error::Capacity(_))));
        assert!(matches!(StateVector::with_cap(11, 1024), Err(Error::Capacity(_))));
        assert!(matches!(StateVector::new(64), Err(Error::Capacity(_))));
    }

    #[test]
    fn x_flips_qubit_zero() {
        let mut s = StateVector::new(1).unwrap();
        s.apply_gate(&Gate::single(GateKind::X, 0)).unwrap();
        assert_eq!(s.amplitudes(), &[c(0.0), c(1.0)]);
    }

    #[test]
    fn bell_state() {
        let mut s = StateVector::new(2).unwrap();
        s.apply_gate(&Gate::single(GateKind::H, 0)).unwrap();
        s.apply_gate(&Gate::cnot(1, 0)).unwrap();
        let a = s.amplitudes();
        assert!((a[0].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((a[3].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(a[1], c(0.0));
        assert_eq!(a[2], c(0.0));
    }

    #[test]
    fn out_of_range_gate_leaves_state_untouched() {
        let mut s = StateVector::new(2).unwrap();
        let circuit = Circuit::from_gates(vec![
            Gate::single(GateKind::H, 0),
            Gate::single(GateKind::X, 2),
        ]);
        let before = s.clone();
        assert!(matches!(s.apply_circuit(&circuit), Err(Error::QubitOutOfRange { .. })));
        assert_eq!(s, before);
    }

    #[test]
    fn swap_and_controlled_swap() {
        let mut s = StateVector::basis_state(3, BasisAddress(0b001)).unwrap();
        s.apply_gate(&Gate::new(GateKind::Swap, 0, Some(1), None).unwrap()).unwrap();
        assert_eq!(s.amplitude(BasisAddress(0b010)), c(1.0));
        let fredkin = Gate::new(GateKind::Swap, 0, Some(1), None).unwrap().controlled_by(2).unwrap();
        s.apply_gate(&fredkin).unwrap();
        assert_eq!(s.amplitude(BasisAddress(0b010)), c(1.0));
        s.apply_gate(&Gate::single(GateKind::X, 2)).unwrap();
        s.apply_gate(&fredkin).unwrap();
        assert_eq!(s.amplitude(BasisAddress(0b101)), c(1.0));
    }

    #[test]
    fn sampling_basis_state_is_deterministic() {
        let s = StateVector::basis_state(2, BasisAddress(3)).unwrap();
        assert!(s.sample_basis_states(50, 1).unwrap().iter().all(|a| a.bits() == 3));
        let s = StateVector::from_amplitudes(vec![c(0.0), c(1.0), c(0.0), c(0.0)]).unwrap();
        assert!(s.sample_basis_states(50, 9).unwrap().iter().all(|a| a.bits() == 1));
        assert!(s.sample_basis_states(0, 9).is_err());
    }
}
