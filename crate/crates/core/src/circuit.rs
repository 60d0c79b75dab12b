//! Ordered gate sequences.

use std::fmt;

use num_complex::Complex64;

use crate::error::Result;
use crate::gate::{Gate, GateKind};

/// A product of gates. The first stored gate acts first.
///
/// A circuit may carry a global phase, multiplied into the state after the
/// gates. Under control the phase becomes observable, so it is promoted to a
/// phase gate on the control qubit by [`Circuit::controlled_by`].
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    gates: Vec<Gate>,
    global_phase: Complex64,
}

impl Default for Circuit {
    fn default() -> Self {
        Self::new()
    }
}

impl Circuit {
    pub fn new() -> Self {
        Self { gates: Vec::new(), global_phase: Complex64::new(1.0, 0.0) }
    }

    pub fn from_gates(gates: Vec<Gate>) -> Self {
        Self { gates, ..Self::new() }
    }

    pub fn add_gate(&mut self, gate: Gate) {
        self.gates.push(gate);
    }

    pub fn add_circuit(&mut self, other: &Circuit) {
        self.gates.extend_from_slice(&other.gates);
        self.global_phase *= other.global_phase;
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn global_phase(&self) -> Complex64 {
        self.global_phase
    }

    pub fn with_global_phase(mut self, phase: Complex64) -> Self {
        self.global_phase *= phase;
        self
    }

    pub fn n_cnot(&self) -> usize {
        self.gates.iter().filter(|g| g.is_cnot()).count()
    }

    /// Highest qubit index touched, if any.
    pub fn max_qubit(&self) -> Option<usize> {
        self.gates.iter().map(Gate::max_qubit).max()
    }

    /// Reversed sequence of adjoint gates, conjugated phase.
    pub fn adjoint(&self) -> Self {
        Self {
            gates: self.gates.iter().rev().map(Gate::adjoint).collect(),
            global_phase: self.global_phase.conj(),
        }
    }

    /// Every gate conditioned on `qubit`; the global phase becomes a phase
    /// gate on the control.
    pub fn controlled_by(&self, qubit: usize) -> Result<Self> {
        let mut gates = self
            .gates
            .iter()
            .map(|g| g.controlled_by(qubit))
            .collect::<Result<Vec<_>>>()?;
        let arg = self.global_phase.arg();
        if arg != 0.0 {
            gates.push(Gate::rotation(GateKind::R, qubit, arg));
        }
        Ok(Self::from_gates(gates))
    }
}

impl FromIterator<Gate> for Circuit {
    fn from_iter<T: IntoIterator<Item = Gate>>(iter: T) -> Self {
        Self::from_gates(iter.into_iter().collect())
    }
}

/// One gate per line in application order; the phase, when present, last.
impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        if self.global_phase != Complex64::new(1.0, 0.0) {
            writeln!(f, "phase {} {}", self.global_phase.re, self.global_phase.im)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjoint_twice_is_identity_structurally() {
        let mut c = Circuit::new();
        c.add_gate(Gate::single(GateKind::H, 0));
        c.add_gate(Gate::cnot(1, 0));
        c.add_gate(Gate::rotation(GateKind::Rz, 1, 0.4));
        c.add_gate(Gate::single(GateKind::T, 1));
        let c = c.with_global_phase(Complex64::from_polar(1.0, 0.3));
        assert_eq!(c.adjoint().adjoint(), c);
        assert_eq!(c.n_cnot(), 1);
        assert_eq!(c.max_qubit(), Some(1));
    }

    #[test]
    fn controlled_circuit_promotes_phase() {
        let c = Circuit::from_gates(vec![Gate::cnot(1, 0)])
            .with_global_phase(Complex64::from_polar(1.0, 0.5));
        let cc = c.controlled_by(2).unwrap();
        assert_eq!(cc.len(), 2);
        assert_eq!(cc.n_cnot(), 0);
        assert_eq!(cc.gates()[1].kind(), GateKind::R);
        assert_eq!(cc.global_phase(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn text_format_lists_gates_in_order() {
        let c = Circuit::from_gates(vec![Gate::single(GateKind::H, 0), Gate::cnot(1, 0)]);
        assert_eq!(c.to_string(), "H 0\nCNOT 1 0\n");
    }
}
