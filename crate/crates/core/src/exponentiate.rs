//! Circuits for exponentials of Pauli strings.

use num_complex::Complex64;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gate::{Gate, GateKind, Y_BASIS_ANGLE};
use crate::pauli::{Pauli, PauliString};

/// Largest real part tolerated in the exponent factor.
const REAL_PART_TOL: f64 = 1e-12;

/// Circuit for `exp(factor · P)` with `factor = −iθ` purely imaginary.
///
/// Layout: X factors are conjugated by H and Y factors by Rx(±π/2); a CNOT
/// ladder runs over the participating qubits in ascending order, Rz(2θ) acts
/// on the highest one, then the ladder and basis changes are mirrored. The
/// circuit uses `2(k−1)` CNOTs for a weight-k string.
///
/// The identity string yields an empty circuit and the global phase
/// `exp(factor)`; every other string returns phase 1.
pub fn exponentiate_pauli_string(
    factor: Complex64,
    string: &PauliString,
) -> Result<(Circuit, Complex64)> {
    if factor.re.abs() > REAL_PART_TOL || !factor.im.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "exponent factor {factor} is not purely imaginary"
        )));
    }
    if string.is_identity() {
        return Ok((Circuit::new(), Complex64::new(0.0, factor.im).exp()));
    }
    let theta = -factor.im;
    let factors = string.factors();
    let mut circuit = Circuit::new();
    let mut basis_in = Vec::new();
    let mut basis_out = Vec::new();
    for &(q, p) in &factors {
        match p {
            Pauli::X => {
                basis_in.push(Gate::single(GateKind::H, q));
                basis_out.push(Gate::single(GateKind::H, q));
            }
            Pauli::Y => {
                basis_in.push(Gate::rotation(GateKind::Rx, q, Y_BASIS_ANGLE));
                basis_out.push(Gate::rotation(GateKind::Rx, q, -Y_BASIS_ANGLE));
            }
            Pauli::Z => {}
        }
    }
    let ladder: Vec<Gate> =
        factors.windows(2).map(|w| Gate::cnot(w[1].0, w[0].0)).collect();
    let top = factors.last().expect("non-identity string").0;

    basis_in.into_iter().for_each(|g| circuit.add_gate(g));
    ladder.iter().cloned().for_each(|g| circuit.add_gate(g));
    circuit.add_gate(Gate::rotation(GateKind::Rz, top, 2.0 * theta));
    ladder.into_iter().rev().for_each(|g| circuit.add_gate(g));
    basis_out.into_iter().rev().for_each(|g| circuit.add_gate(g));
    Ok((circuit, Complex64::new(1.0, 0.0)))
}

/// CNOT count of [`exponentiate_pauli_string`] for `string`.
pub fn pauli_exponential_cnots(string: &PauliString) -> usize {
    2 * string.weight().saturating_sub(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_matches_reference_example() {
        let s = PauliString::new(&[(0, Pauli::Z), (1, Pauli::Z), (2, Pauli::X)]).unwrap();
        let (c, phase) = exponentiate_pauli_string(Complex64::new(0.0, -0.5), &s).unwrap();
        assert_eq!(phase, Complex64::new(1.0, 0.0));
        let expected = [
            Gate::single(GateKind::H, 2),
            Gate::cnot(1, 0),
            Gate::cnot(2, 1),
            Gate::rotation(GateKind::Rz, 2, 1.0),
            Gate::cnot(2, 1),
            Gate::cnot(1, 0),
            Gate::single(GateKind::H, 2),
        ];
        assert_eq!(c.gates(), &expected);
        assert_eq!(c.n_cnot(), 4);
    }

    #[test]
    fn identity_string_is_pure_phase() {
        let (c, phase) =
            exponentiate_pauli_string(Complex64::new(0.0, 0.3), &PauliString::identity()).unwrap();
        assert!(c.is_empty());
        assert!((phase - Complex64::from_polar(1.0, 0.3)).norm() < 1e-15);
    }

    #[test]
    fn real_factor_rejected() {
        let s = PauliString::single(0, Pauli::X);
        assert!(exponentiate_pauli_string(Complex64::new(0.1, 0.2), &s).is_err());
    }

    #[test]
    fn adjoint_equals_negated_factor() {
        let s = PauliString::new(&[(0, Pauli::Y), (2, Pauli::X), (3, Pauli::Z)]).unwrap();
        let (c, _) = exponentiate_pauli_string(Complex64::new(0.0, 0.7), &s).unwrap();
        let (m, _) = exponentiate_pauli_string(Complex64::new(0.0, -0.7), &s).unwrap();
        assert_eq!(c.adjoint(), m);
        assert_eq!(c.n_cnot(), pauli_exponential_cnots(&s));
    }
}
