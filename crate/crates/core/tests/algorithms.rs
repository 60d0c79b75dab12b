use std::path::PathBuf;

use molqs::algorithms::{
    run_mrsqk, run_qk, run_spqe, run_vqe, MrsqkOptions, QkOptions, SpqeOptions, VqeOptions,
};
use molqs::solvers::fci_oracle;
use molqs::system::PoolKind;
use molqs::MolecularSystem;

fn load(name: &str) -> MolecularSystem {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    MolecularSystem::load_fcidump(path).unwrap()
}

fn fci(sys: &MolecularSystem) -> f64 {
    fci_oracle(sys.hamiltonian(), sys.n_qubits(), Some(sys.n_electrons())).unwrap().energy
}

#[test]
fn multireference_krylov_improves_on_single_reference() {
    let sys = load("H4_2.00.fcidump");
    let qk = QkOptions { s: 2, ..Default::default() };
    let single = run_qk(&sys, &qk).unwrap().energy();
    let multi = run_mrsqk(&sys, &MrsqkOptions { d: 2, qk: qk.clone(), ..Default::default() }).unwrap();
    let e = fci(&sys);
    assert!(multi.references.len() >= 2);
    assert!(multi.energy() < single, "{} vs {single}", multi.energy());
    assert!(multi.energy() >= e - 1e-8);
}

#[test]
fn sampled_spqe_tracks_exact_selection() {
    let sys = load("H4_1.50.fcidump");
    let e = fci(&sys);
    // Residual probabilities scale as dt², so sampling needs a coarser step.
    let opts = SpqeOptions { omega: 1e-2, dt: 0.1, ..Default::default() };
    let exact = run_spqe(&sys, &opts).unwrap();
    let sampled = run_spqe(&sys, &SpqeOptions { shots: Some(1_000_000), seed: 5, ..opts.clone() }).unwrap();
    assert!(exact.energy >= e - 1e-8 && sampled.energy >= e - 1e-8);
    assert!((sampled.energy - exact.energy).abs() < 1e-3);
    assert!(exact.energy - e < 1e-2);
}

#[test]
fn larger_pools_lower_the_energy() {
    let sys = load("H4_1.00.fcidump");
    let paired = run_vqe(&sys, &VqeOptions { pool: PoolKind::PairedD, ..Default::default() }).unwrap();
    let sd = run_vqe(&sys, &VqeOptions::default()).unwrap();
    assert!(sd.energy < paired.energy);
    assert!(sd.energy >= fci(&sys) - 1e-9);
    assert!(paired.energy < sys.hf_energy());
}
