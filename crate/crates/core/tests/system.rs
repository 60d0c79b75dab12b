use std::path::PathBuf;

use molqs::dense::qubit_operator_matrix;
use molqs::fermion::number_operator;
use molqs::oracle::max_abs_diff;
use molqs::solvers::{fci_oracle, hermitian_eigen};
use molqs::system::{build_pool, rhf_energy, Integrals, PoolKind};
use molqs::{BasisAddress, MolecularSystem, StateVector};
use num_complex::Complex64;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn load(name: &str) -> MolecularSystem {
    MolecularSystem::load_fcidump(fixture(name)).unwrap()
}

fn stored_rhf(name: &str) -> f64 {
    let text = std::fs::read_to_string(fixture("rhf_energies.txt")).unwrap();
    text.lines()
        .find_map(|l| {
            let mut it = l.split_whitespace();
            (it.next() == Some(name)).then(|| it.next().unwrap().parse().unwrap())
        })
        .unwrap()
}

#[test]
fn h2_hamiltonian_shape_and_hf_energy() {
    let sys = load("H2_0.75.fcidump");
    assert_eq!(sys.n_qubits(), 4);
    assert_eq!(sys.n_pauli_strings(), 15);
    assert!(sys.hamiltonian().is_hermitian(1e-14));
    let ints = sys.integrals().unwrap();
    let classical = rhf_energy(ints, 1, sys.e_nuclear());
    assert!((sys.hf_energy() - classical).abs() < 1e-10);
    // Agrees with the SCF program that produced the integrals.
    assert!((classical - stored_rhf("H2_0.75.fcidump")).abs() < 1e-8);
}

#[test]
fn h4_and_h6_hf_energies_match_scf() {
    for name in ["H4_0.50.fcidump", "H4_1.50.fcidump", "H6_1.00.fcidump"] {
        let sys = load(name);
        assert!((sys.hf_energy() - stored_rhf(name)).abs() < 1e-8, "{name}");
    }
}

#[test]
fn hamiltonian_conserves_particle_number() {
    let sys = load("H4_1.00.fcidump");
    let h = qubit_operator_matrix(sys.hamiltonian(), 8).unwrap();
    let n = qubit_operator_matrix(&number_operator(8).jw_transform(), 8).unwrap();
    assert!(max_abs_diff(&(&h * &n), &(&n * &h)) < 1e-12);
}

#[test]
fn variational_bound_and_reference_number() {
    let sys = load("H4_1.00.fcidump");
    let fci = fci_oracle(sys.hamiltonian(), 8, None).unwrap();
    assert!(sys.hf_energy() >= fci.energy);
    let mut s = StateVector::new(8).unwrap();
    sys.prepare_reference(&mut s).unwrap();
    assert_eq!(s.amplitude(BasisAddress(0b1111)), Complex64::new(1.0, 0.0));
    let n = s.energy(&number_operator(8).jw_transform()).unwrap();
    assert!((n - 4.0).abs() < 1e-14);
}

#[test]
fn one_electron_spectrum() {
    let mut ints = Integrals::zeros(2);
    ints.set_h(0, 0, -1.0);
    ints.set_h(1, 1, 0.3);
    ints.set_h(0, 1, 0.2);
    let sys = MolecularSystem::from_integrals(ints.clone(), 1, 1, 0.0, None).unwrap();
    let h1 = nalgebra::DMatrix::from_fn(2, 2, |p, q| Complex64::new(ints.h(p, q), 0.0));
    let (orb, _) = hermitian_eigen(&h1);
    // One particle: the spectrum is each orbital energy once per spin.
    let one = fci_oracle(sys.hamiltonian(), 4, Some(1)).unwrap();
    assert!((one.energy - orb[0]).abs() < 1e-12);
    let (all, _) = hermitian_eigen(&qubit_operator_matrix(sys.hamiltonian(), 4).unwrap());
    let mut expected = Vec::new();
    for mask in 0u32..16 {
        let e: f64 = (0..4).filter(|b| mask >> b & 1 == 1).map(|b| orb[b / 2]).sum();
        expected.push(e);
    }
    expected.sort_by(f64::total_cmp);
    for (a, b) in all.iter().zip(&expected) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn vacuum_energy_is_nuclear_repulsion() {
    let text = " &FCI NORB=2,NELEC=0,MS2=0, &END\n0.5 1 1 1 1\n-1.0 1 1 0 0\n0.7 0 0 0 0\n";
    let sys = MolecularSystem::from_fcidump_data(molqs::system::parse_fcidump(text).unwrap()).unwrap();
    assert_eq!(sys.hf_reference(), BasisAddress(0));
    assert!((sys.hf_energy() - 0.7).abs() < 1e-15);
}

fn pool_cnots(pool: &molqs::system::OperatorPool) -> usize {
    pool.entries()
        .iter()
        .flat_map(|e| e.qubit_generator.terms())
        .map(|(_, s)| molqs::exponentiate::pauli_exponential_cnots(s))
        .sum()
}

#[test]
fn pool_sizes() {
    let h2 = load("H2_0.75.fcidump");
    let sd = build_pool(&h2, PoolKind::SD).unwrap();
    assert_eq!(sd.len(), 3);
    assert_eq!(sd.entries().iter().filter(|e| e.excitation.rank() == 1).count(), 2);

    let h4 = load("H4_1.00.fcidump");
    let sd = build_pool(&h4, PoolKind::SD).unwrap();
    assert_eq!(sd.len(), 14);
    assert_eq!(pool_cnots(&sd), 736);
    let pd = build_pool(&h4, PoolKind::PairedD).unwrap();
    assert_eq!(pd.len(), 4);
    assert_eq!(pool_cnots(&pd), 192);
}

#[test]
fn pool_invariants() {
    let h4 = load("H4_1.00.fcidump");
    for kind in [PoolKind::SD, PoolKind::SDT, PoolKind::Gsd, PoolKind::PairedD] {
        let pool = build_pool(&h4, kind).unwrap();
        let mut labels = std::collections::HashSet::new();
        let mut last = BasisAddress(0);
        for e in pool.entries() {
            assert!(labels.insert(e.excitation.clone()), "{kind}: duplicate label");
            assert!(e.qubit_generator.terms().iter().all(|(c, _)| c.re.abs() < 1e-14));
            assert!(!e.qubit_generator.is_empty());
            assert!(e.excited >= last);
            last = e.excited;
            let so = |v: &[usize]| v.iter().filter(|p| *p % 2 == 0).count();
            assert_eq!(so(&e.excitation.from), so(&e.excitation.to));
        }
    }
}
