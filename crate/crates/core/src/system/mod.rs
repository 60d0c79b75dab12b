//! Molecular systems: integrals, Hamiltonians, references and operator pools.
//!
//! Spatial orbital `p` maps to spin orbitals (qubits) `2p` (α) and `2p + 1`
//! (β). The reference determinant fills the lowest `n_α = (N + MS2)/2` α and
//! `n_β = (N − MS2)/2` β spin orbitals.

mod fcidump;
pub(crate) mod hamiltonian;
mod json;
mod pool;

use std::path::Path;

use num_complex::Complex64;

use crate::basis::BasisAddress;
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::fermion::SqOperator;
use crate::gate::{Gate, GateKind};
use crate::pauli::QubitOperator;
use crate::state::StateVector;

pub use fcidump::{parse_fcidump, read_fcidump, FcidumpData};
pub use hamiltonian::{build_qubit_hamiltonian, build_sq_hamiltonian, rhf_energy};
pub use json::{parse_hamiltonian_json, read_hamiltonian_json, write_hamiltonian_json};
pub use pool::{build_pool, Excitation, OperatorPool, PoolKind, PoolOperator};

/// Real spatial-orbital integrals: `h_pq` and chemist-notation `(pq|rs)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Integrals {
    n: usize,
    h: Vec<f64>,
    g: Vec<f64>,
    /// Irreducible-representation label per spatial orbital (1-based, as in
    /// FCIDUMP `ORBSYM`; all 1 without symmetry).
    pub orbsym: Vec<u8>,
}

impl Integrals {
    pub fn zeros(n_spatial: usize) -> Self {
        Self {
            n: n_spatial,
            h: vec![0.0; n_spatial * n_spatial],
            g: vec![0.0; n_spatial.pow(4)],
            orbsym: vec![1; n_spatial],
        }
    }

    pub fn n_spatial(&self) -> usize {
        self.n
    }

    pub fn h(&self, p: usize, q: usize) -> f64 {
        self.h[p * self.n + q]
    }

    pub fn g(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        self.g[((p * self.n + q) * self.n + r) * self.n + s]
    }

    /// Sets `h_pq = h_qp = v`.
    pub fn set_h(&mut self, p: usize, q: usize, v: f64) {
        let n = self.n;
        self.h[p * n + q] = v;
        self.h[q * n + p] = v;
    }

    /// Sets `(pq|rs)` and its seven permutational partners.
    pub fn set_g(&mut self, p: usize, q: usize, r: usize, s: usize, v: f64) {
        let n = self.n;
        let at = |a: usize, b: usize, c: usize, d: usize| ((a * n + b) * n + c) * n + d;
        for (a, b, c, d) in [
            (p, q, r, s),
            (q, p, r, s),
            (p, q, s, r),
            (q, p, s, r),
            (r, s, p, q),
            (s, r, p, q),
            (r, s, q, p),
            (s, r, q, p),
        ] {
            self.g[at(a, b, c, d)] = v;
        }
    }
}

/// A molecule (or any fermionic model) ready for the algorithms.
#[derive(Debug, Clone)]
pub struct MolecularSystem {
    n_qubits: usize,
    n_electrons: usize,
    ms2: i64,
    e_nuclear: f64,
    integrals: Option<Integrals>,
    spin_orbital_energies: Option<Vec<f64>>,
    sq_hamiltonian: Option<SqOperator>,
    qubit_hamiltonian: QubitOperator,
    hf_reference: BasisAddress,
}

/// Reference determinant with the lowest α and β spin orbitals filled.
pub fn reference_determinant(n_spatial: usize, n_electrons: usize, ms2: i64) -> Result<BasisAddress> {
    let n = n_electrons as i64;
    if (n + ms2) % 2 != 0 || ms2.abs() > n {
        return Err(Error::InvalidArgument(format!(
            "MS2 = {ms2} is incompatible with {n_electrons} electrons"
        )));
    }
    let (n_alpha, n_beta) = (((n + ms2) / 2) as usize, ((n - ms2) / 2) as usize);
    if n_alpha > n_spatial || n_beta > n_spatial {
        return Err(Error::InvalidArgument(format!(
            "{n_alpha} α and {n_beta} β electrons do not fit in {n_spatial} orbitals"
        )));
    }
    let occ: Vec<usize> = (0..n_alpha).map(|p| 2 * p).chain((0..n_beta).map(|p| 2 * p + 1)).collect();
    Ok(BasisAddress::from_occupied(&occ))
}

impl MolecularSystem {
    /// Builds the system from integrals. Orbital energies default to the
    /// diagonal of the reference Fock operator.
    pub fn from_integrals(
        integrals: Integrals,
        n_electrons: usize,
        ms2: i64,
        e_nuclear: f64,
        orbital_energies: Option<Vec<f64>>,
    ) -> Result<Self> {
        let n = integrals.n_spatial();
        if n == 0 || 2 * n > 64 {
            return Err(Error::InvalidArgument(format!("{n} spatial orbitals is out of range")));
        }
        if n_electrons > 2 * n {
            return Err(Error::InvalidArgument(format!(
                "{n_electrons} electrons exceed {} spin orbitals",
                2 * n
            )));
        }
        let hf_reference = reference_determinant(n, n_electrons, ms2)?;
        let spin_orbital_energies = match orbital_energies {
            Some(e) => {
                if e.len() != n {
                    return Err(Error::InvalidArgument(format!(
                        "{} orbital energies for {n} orbitals",
                        e.len()
                    )));
                }
                (0..2 * n).map(|p| e[p / 2]).collect()
            }
            None => hamiltonian::fock_diagonal(&integrals, hf_reference),
        };
        let sq = build_sq_hamiltonian(&integrals, e_nuclear);
        let qubit_hamiltonian = build_qubit_hamiltonian(&sq);
        Ok(Self {
            n_qubits: 2 * n,
            n_electrons,
            ms2,
            e_nuclear,
            integrals: Some(integrals),
            spin_orbital_energies: Some(spin_orbital_energies),
            sq_hamiltonian: Some(sq),
            qubit_hamiltonian,
            hf_reference,
        })
    }

    pub fn from_fcidump_data(d: FcidumpData) -> Result<Self> {
        Self::from_integrals(d.integrals, d.n_electrons, d.ms2, d.e_nuclear, d.orbital_energies)
    }

    /// Loads an FCIDUMP file.
    pub fn load_fcidump(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_fcidump_data(read_fcidump(path)?)
    }

    /// A system known only through its qubit Hamiltonian. Operator pools are
    /// unavailable; the reference fills the lowest spin orbitals.
    pub fn from_qubit_hamiltonian(
        h: QubitOperator,
        n_qubits: usize,
        n_electrons: usize,
        ms2: i64,
    ) -> Result<Self> {
        if n_qubits == 0 || n_qubits > 64 {
            return Err(Error::InvalidArgument(format!("{n_qubits} qubits is out of range")));
        }
        if let Some(q) = h.max_qubit() {
            if q >= n_qubits {
                return Err(Error::QubitOutOfRange { index: q, n_qubits });
            }
        }
        if !h.is_hermitian(1e-12) {
            return Err(Error::InvalidOperator("Hamiltonian is not Hermitian".into()));
        }
        let hf_reference = reference_determinant(n_qubits.div_ceil(2), n_electrons, ms2)?;
        if hf_reference.bits() >> n_qubits != 0 {
            return Err(Error::InvalidArgument(format!(
                "{n_electrons} electrons do not fit in {n_qubits} qubits"
            )));
        }
        Ok(Self {
            n_qubits,
            n_electrons,
            ms2,
            e_nuclear: h.identity_coefficient().re,
            integrals: None,
            spin_orbital_energies: None,
            sq_hamiltonian: None,
            qubit_hamiltonian: h,
            hf_reference,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_spatial(&self) -> usize {
        self.n_qubits / 2
    }

    pub fn n_electrons(&self) -> usize {
        self.n_electrons
    }

    pub fn ms2(&self) -> i64 {
        self.ms2
    }

    pub fn e_nuclear(&self) -> f64 {
        self.e_nuclear
    }

    pub fn integrals(&self) -> Option<&Integrals> {
        self.integrals.as_ref()
    }

    /// Orbital energy per spin orbital.
    pub fn spin_orbital_energies(&self) -> Option<&[f64]> {
        self.spin_orbital_energies.as_deref()
    }

    /// Orbital energy per spatial orbital (α component).
    pub fn orbital_energies(&self) -> Option<Vec<f64>> {
        self.spin_orbital_energies.as_ref().map(|e| e.iter().step_by(2).copied().collect())
    }

    pub fn sq_hamiltonian(&self) -> Option<&SqOperator> {
        self.sq_hamiltonian.as_ref()
    }

    pub fn hamiltonian(&self) -> &QubitOperator {
        &self.qubit_hamiltonian
    }

    /// Number of distinct Pauli strings in the qubit Hamiltonian, identity included.
    pub fn n_pauli_strings(&self) -> usize {
        self.qubit_hamiltonian.len()
    }

    pub fn hf_reference(&self) -> BasisAddress {
        self.hf_reference
    }

    /// X gates on the occupied spin orbitals of `reference`.
    pub fn reference_circuit(reference: BasisAddress) -> Circuit {
        reference.occupied().into_iter().map(|q| Gate::single(GateKind::X, q)).collect()
    }

    /// `⟨HF|H|HF⟩`, total energy including nuclear repulsion.
    pub fn hf_energy(&self) -> f64 {
        let h = &self.qubit_hamiltonian;
        h.terms()
            .iter()
            .filter(|(_, s)| s.x_mask() == 0)
            .map(|(c, s)| {
                let (phase, _) = s.apply_to_basis(self.hf_reference.bits());
                (c * phase).re
            })
            .sum()
    }

    /// Loads the reference determinant into a freshly initialized state.
    pub fn prepare_reference(&self, state: &mut StateVector) -> Result<()> {
        prepare_determinant(self.hf_reference, self.n_qubits, state)
    }

    /// A new state vector holding the reference determinant.
    pub fn reference_state(&self) -> Result<StateVector> {
        StateVector::basis_state(self.n_qubits, self.hf_reference)
    }
}

/// Applies X gates for `det` to `state`, which must be `|0…0⟩` on at least
/// `n_qubits` qubits.
pub fn prepare_determinant(det: BasisAddress, n_qubits: usize, state: &mut StateVector) -> Result<()> {
    if state.n_qubits() < n_qubits {
        return Err(Error::InvalidArgument(format!(
            "state has {} qubits, system needs {n_qubits}",
            state.n_qubits()
        )));
    }
    let amps = state.amplitudes();
    let fresh = (amps[0] - Complex64::new(1.0, 0.0)).norm() < 1e-14
        && amps[1..].iter().all(|a| a.norm() < 1e-14);
    if !fresh {
        return Err(Error::InvalidArgument("reference preparation needs |0…0⟩".into()));
    }
    state.apply_circuit(&MolecularSystem::reference_circuit(det))
}
