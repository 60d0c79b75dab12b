//! Dense matrix representations of qubit operators.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::basis::BasisAddress;
use crate::error::{Error, Result};
use crate::pauli::QubitOperator;

/// Largest register for which dense matrices are built.
pub const DENSE_QUBIT_CAP: usize = 12;

/// `Σ_ℓ u_ℓ P_ℓ` as a `2^n × 2^n` matrix; row/column index is the basis address.
pub fn qubit_operator_matrix(op: &QubitOperator, n_qubits: usize) -> Result<DMatrix<Complex64>> {
    if n_qubits > DENSE_QUBIT_CAP {
        return Err(Error::Capacity(format!(
            "dense matrices are limited to {DENSE_QUBIT_CAP} qubits (asked for {n_qubits})"
        )));
    }
    if let Some(q) = op.max_qubit() {
        if q >= n_qubits {
            return Err(Error::QubitOutOfRange { index: q, n_qubits });
        }
    }
    let dim = 1usize << n_qubits;
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for (c, s) in op.terms() {
        for col in 0..dim {
            let (phase, row) = s.apply_to_basis(col as u64);
            m[(row as usize, col)] += c * phase;
        }
    }
    Ok(m)
}

/// Basis addresses with exactly `n_particles` set bits, ascending.
pub fn particle_sector(n_qubits: usize, n_particles: usize) -> Vec<BasisAddress> {
    (0u64..1 << n_qubits)
        .filter(|b| b.count_ones() as usize == n_particles)
        .map(BasisAddress)
        .collect()
}

/// Matrix of `op` restricted to the span of `basis`. Matrix elements that
/// leave the span are dropped, so the result is exact only for operators
/// that preserve it.
pub fn projected_matrix(op: &QubitOperator, basis: &[BasisAddress]) -> DMatrix<Complex64> {
    let index: std::collections::HashMap<u64, usize> =
        basis.iter().enumerate().map(|(i, b)| (b.bits(), i)).collect();
    let dim = basis.len();
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for (c, s) in op.terms() {
        for (col, b) in basis.iter().enumerate() {
            let (phase, row) = s.apply_to_basis(b.bits());
            if let Some(&r) = index.get(&row) {
                m[(r, col)] += c * phase;
            }
        }
    }
    m
}
