//! Computational-basis addresses.

use std::fmt;

/// One element of the n-qubit Fock-space basis.
///
/// Bit `i` holds the state of qubit `i`; qubit 0 is the least significant
/// bit, so the integer value doubles as the index into a state vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BasisAddress(pub u64);

impl BasisAddress {
    pub fn new(bits: u64) -> Self {
        Self(bits)
    }

    /// Address with exactly the listed qubits set.
    pub fn from_occupied(qubits: &[usize]) -> Self {
        Self(qubits.iter().fold(0u64, |acc, &q| acc | (1u64 << q)))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn get(self, qubit: usize) -> bool {
        (self.0 >> qubit) & 1 == 1
    }

    pub fn set(&mut self, qubit: usize, value: bool) {
        if value {
            self.0 |= 1 << qubit;
        } else {
            self.0 &= !(1 << qubit);
        }
    }

    pub fn flip(self, qubit: usize) -> Self {
        Self(self.0 ^ (1 << qubit))
    }

    pub fn count_ones(self) -> u32 {
        self.0.count_ones()
    }

    /// Set qubits in ascending order.
    pub fn occupied(self) -> Vec<usize> {
        (0..64).filter(|&q| self.get(q)).collect()
    }

    /// Renders the lowest `n_qubits` bits with qubit 0 first.
    pub fn to_string_width(self, n_qubits: usize) -> String {
        (0..n_qubits)
            .map(|q| if self.get(q) { '1' } else { '0' })
            .collect()
    }
}

impl From<u64> for BasisAddress {
    fn from(bits: u64) -> Self {
        Self(bits)
    }
}

impl fmt::Display for BasisAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{}⟩", self.0)
    }
}
