//! JSON exchange format for qubit Hamiltonians:
//! `{"n_qubits": n, "terms": [{"coeff": [re, im], "paulis": [[q, "X"], …]}]}`.
//! An optional `"n_electrons"` (and `"ms2"`) selects the reference determinant.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString, QubitOperator};
use crate::system::MolecularSystem;

#[derive(Debug, Serialize, Deserialize)]
struct JsonTerm {
    coeff: [f64; 2],
    paulis: Vec<(usize, String)>,
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonHamiltonian {
    n_qubits: usize,
    terms: Vec<JsonTerm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n_electrons: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ms2: Option<i64>,
}

fn axis(s: &str) -> Result<Pauli> {
    match s {
        "X" | "x" => Ok(Pauli::X),
        "Y" | "y" => Ok(Pauli::Y),
        "Z" | "z" => Ok(Pauli::Z),
        _ => Err(Error::InvalidOperator(format!("unknown Pauli axis '{s}'"))),
    }
}

pub fn parse_hamiltonian_json(text: &str) -> Result<MolecularSystem> {
    let doc: JsonHamiltonian = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    let mut h = QubitOperator::new();
    for t in &doc.terms {
        let factors = t
            .paulis
            .iter()
            .map(|(q, a)| Ok((*q, axis(a)?)))
            .collect::<Result<Vec<_>>>()?;
        h.add_term(Complex64::new(t.coeff[0], t.coeff[1]), PauliString::new(&factors)?);
    }
    MolecularSystem::from_qubit_hamiltonian(
        h.simplify(),
        doc.n_qubits,
        doc.n_electrons.unwrap_or(0),
        doc.ms2.unwrap_or(0),
    )
}

pub fn read_hamiltonian_json(path: impl AsRef<Path>) -> Result<MolecularSystem> {
    parse_hamiltonian_json(&std::fs::read_to_string(path)?)
}

/// Serializes the system's qubit Hamiltonian.
pub fn write_hamiltonian_json(system: &MolecularSystem) -> String {
    let terms = system
        .hamiltonian()
        .terms()
        .iter()
        .map(|(c, s)| JsonTerm {
            coeff: [c.re, c.im],
            paulis: s.factors().into_iter().map(|(q, p)| (q, p.symbol().to_string())).collect(),
        })
        .collect();
    let doc = JsonHamiltonian {
        n_qubits: system.n_qubits(),
        terms,
        n_electrons: Some(system.n_electrons()),
        ms2: Some(system.ms2()),
    };
    serde_json::to_string_pretty(&doc).expect("plain data serializes")
}
