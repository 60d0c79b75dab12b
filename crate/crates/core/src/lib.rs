//! State-vector simulation of quantum algorithms for molecular electronic
//! structure.
//!
//! The crate is layered bottom-up:
//!
//! * [`state`], [`gate`], [`circuit`], [`basis`]: the simulator.
//! * [`pauli`], [`fermion`], [`exponentiate`], [`dense`]: operator algebra,
//!   the Jordan–Wigner encoding and Pauli-exponential synthesis.
//! * [`system`]: FCIDUMP ingestion, Hamiltonians, reference states, pools.
//! * [`dynamics`]: Trotterized, exact and controlled time evolution.
//! * [`solvers`]: eigensolvers, linear solves, minimizers, the FCI oracle.
//! * [`algorithms`]: VQE, ADAPT-VQE, PQE, SPQE, QITE, QLanczos, QK, MRSQK, QPE.
//! * [`oracle`]: independent dense reference constructions used by tests.

pub mod algorithms;
pub mod basis;
pub mod circuit;
pub mod dense;
pub mod dynamics;
pub mod error;
pub mod exponentiate;
pub mod fermion;
pub mod gate;
pub mod oracle;
pub mod pauli;
pub mod solvers;
pub mod state;
pub mod system;

pub use basis::BasisAddress;
pub use circuit::Circuit;
pub use error::{Error, Result};
pub use fermion::SqOperator;
pub use gate::{Gate, GateKind};
pub use pauli::{Pauli, PauliString, QubitOperator};
pub use state::StateVector;
pub use system::MolecularSystem;
