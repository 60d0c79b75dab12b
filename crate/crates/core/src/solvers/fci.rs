use num_complex::Complex64;

use crate::dense::{particle_sector, projected_matrix, qubit_operator_matrix, DENSE_QUBIT_CAP};
use crate::error::{Error, Result};
use crate::pauli::QubitOperator;
use crate::solvers::hermitian_eigen;
use crate::state::StateVector;

#[derive(Debug, Clone)]
pub struct FciResult {
    pub energy: f64,
    /// Ground state on the full register (zero outside the sector).
    pub state: StateVector,
}

/// Lowest eigenpair of `h` by dense diagonalization, optionally restricted
/// to basis states with `n_electrons` set bits.
pub fn fci_oracle(
    h: &QubitOperator,
    n_qubits: usize,
    n_electrons: Option<usize>,
) -> Result<FciResult> {
    if n_qubits > DENSE_QUBIT_CAP {
        return Err(Error::Capacity(format!(
            "exact diagonalization is limited to {DENSE_QUBIT_CAP} qubits (asked for {n_qubits})"
        )));
    }
    if let Some(q) = h.max_qubit() {
        if q >= n_qubits {
            return Err(Error::QubitOutOfRange { index: q, n_qubits });
        }
    }
    let dim = 1usize << n_qubits;
    let (values, vectors, basis): (_, _, Vec<usize>) = match n_electrons {
        Some(n) => {
            if n > n_qubits {
                return Err(Error::InvalidArgument(format!(
                    "{n} electrons do not fit in {n_qubits} spin orbitals"
                )));
            }
            let sector = particle_sector(n_qubits, n);
            let (v, u) = hermitian_eigen(&projected_matrix(h, &sector));
            (v, u, sector.iter().map(|b| b.index()).collect())
        }
        None => {
            let (v, u) = hermitian_eigen(&qubit_operator_matrix(h, n_qubits)?);
            (v, u, (0..dim).collect())
        }
    };
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    for (i, &addr) in basis.iter().enumerate() {
        amps[addr] = vectors[(i, 0)];
    }
    // Fix the phase so the largest component is real positive.
    let lead = amps
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap_or(Complex64::new(1.0, 0.0));
    let fix = lead.conj() / lead.norm();
    amps.iter_mut().for_each(|a| *a *= fix);
    let mut state = StateVector::from_amplitudes(amps)?;
    state.normalize();
    Ok(FciResult { energy: values[0], state })
}
