//! Quantum Krylov: diagonalize H in a basis of real-time evolved states,
//! from one reference (QK) or several selected ones (MRSQK).

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::basis::BasisAddress;
use crate::circuit::Circuit;
use crate::dynamics::{matrix_element, trotter_circuit, ElementMethod, EvolutionSpec, SpectralPropagator};
use crate::error::{Error, Result};
use crate::solvers::{solve_generalized_eig, GeneralizedEigProblem, DEFAULT_TRIM_THRESHOLD};
use crate::state::StateVector;
use crate::system::{prepare_determinant, MolecularSystem};

use super::ucc::overlap;
use super::{ResourceReport, SubspaceResult};

/// How basis states are propagated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KrylovEvolution {
    /// `r`-step Trotter circuit for each time `nΔt`.
    Trotter { steps: usize },
    /// Exact propagator (dense, small registers only).
    Exact,
}

#[derive(Debug, Clone)]
pub struct QkOptions {
    pub s: usize,
    pub dt: f64,
    pub evolution: KrylovEvolution,
    pub method: ElementMethod,
    pub trim_threshold: f64,
}

impl Default for QkOptions {
    fn default() -> Self {
        Self {
            s: 3,
            dt: 0.5,
            evolution: KrylovEvolution::Trotter { steps: 1 },
            method: ElementMethod::Direct,
            trim_threshold: DEFAULT_TRIM_THRESHOLD,
        }
    }
}

#[derive(Debug, Clone)]
pub struct QkResult {
    pub subspace: SubspaceResult,
    pub report: ResourceReport,
    /// Reference determinants, one block of `s + 1` states each.
    pub references: Vec<BasisAddress>,
}

impl QkResult {
    pub fn energy(&self) -> f64 {
        self.subspace.ground_energy()
    }
}

/// One evolved basis state: its preparation circuit (if Trotterized) and
/// its amplitudes.
struct BasisState {
    prep: Option<Circuit>,
    state: StateVector,
}

fn build_basis(
    system: &MolecularSystem,
    references: &[BasisAddress],
    opts: &QkOptions,
    propagator: Option<&SpectralPropagator>,
) -> Result<(Vec<BasisState>, usize)> {
    let n = system.n_qubits();
    let mut out = Vec::new();
    let mut step_cnots = 0;
    for &det in references {
        for k in 0..=opts.s {
            let t = k as f64 * opts.dt;
            let mut state = StateVector::new(n)?;
            prepare_determinant(det, n, &mut state)?;
            let prep = match opts.evolution {
                KrylovEvolution::Trotter { steps } => {
                    let evo = trotter_circuit(system.hamiltonian(), &EvolutionSpec::trotter(t, steps))?;
                    step_cnots = step_cnots.max(evo.n_cnot());
                    state.apply_circuit(&evo)?;
                    let mut c = MolecularSystem::reference_circuit(det);
                    c.add_circuit(&evo);
                    Some(c)
                }
                KrylovEvolution::Exact => {
                    propagator.expect("built for exact evolution").apply(t, &mut state, 0)?;
                    None
                }
            };
            out.push(BasisState { prep, state });
        }
    }
    Ok((out, step_cnots))
}

fn solve_subspace(
    system: &MolecularSystem,
    references: Vec<BasisAddress>,
    opts: &QkOptions,
) -> Result<QkResult> {
    let propagator = match opts.evolution {
        KrylovEvolution::Exact => Some(SpectralPropagator::new(system.hamiltonian(), system.n_qubits())?),
        KrylovEvolution::Trotter { steps: 0 } => {
            return Err(Error::InvalidArgument("at least one Trotter step is required".into()))
        }
        KrylovEvolution::Trotter { .. } => None,
    };
    let (basis, step_cnots) = build_basis(system, &references, opts, propagator.as_ref())?;
    let dim = basis.len();
    let h = system.hamiltonian();
    let mut s = DMatrix::<Complex64>::zeros(dim, dim);
    let mut hm = DMatrix::<Complex64>::zeros(dim, dim);
    let use_circuits = opts.method != ElementMethod::Direct && basis[0].prep.is_some();
    let h_states: Vec<StateVector> = if use_circuits {
        Vec::new()
    } else {
        basis.iter().map(|b| b.state.apply_operator(h)).collect::<Result<_>>()?
    };
    for i in 0..dim {
        for j in i..dim {
            let (sij, hij) = if use_circuits {
                let (bi, bj) = (basis[i].prep.as_ref().expect("circuit"), basis[j].prep.as_ref().expect("circuit"));
                let n = system.n_qubits();
                let sij = if i == j { Complex64::new(1.0, 0.0) } else { matrix_element(bi, bj, None, n, opts.method)? };
                (sij, matrix_element(bi, bj, Some(h), n, opts.method)?)
            } else {
                (overlap(&basis[i].state, &basis[j].state), overlap(&basis[i].state, &h_states[j]))
            };
            s[(i, j)] = sij;
            s[(j, i)] = sij.conj();
            hm[(i, j)] = hij;
            hm[(j, i)] = hij.conj();
        }
    }
    let sol = solve_generalized_eig(&GeneralizedEigProblem::new(hm.clone(), s.clone()).with_trim(opts.trim_threshold))?;
    if sol.retained_dim == 0 {
        return Err(Error::Numerical("every subspace direction was trimmed".into()));
    }
    let n_ps = system.n_pauli_strings();
    let report = ResourceReport {
        n_parameters: dim,
        // A transition element needs U_m† U_n: two evolution circuits.
        n_cnot: 2 * step_cnots,
        n_pauli_evaluations: dim * dim * n_ps + dim * (dim - 1),
        n_gradient_pauli_evaluations: 0,
        n_iterations: 1,
        final_energy: sol.eigenvalues[0],
    };
    Ok(QkResult {
        subspace: SubspaceResult {
            ground_vector: sol.eigenvectors.column(0).iter().copied().collect(),
            s,
            h: hm,
            energies: sol.eigenvalues,
            retained_dim: sol.retained_dim,
        },
        report,
        references,
    })
}

/// Single-reference Krylov subspace from the Hartree–Fock determinant.
pub fn run_qk(system: &MolecularSystem, opts: &QkOptions) -> Result<QkResult> {
    solve_subspace(system, vec![system.hf_reference()], opts)
}

#[derive(Debug, Clone)]
pub struct MrsqkOptions {
    /// Number of references.
    pub d: usize,
    pub qk: QkOptions,
    /// Preliminary single-reference run; defaults to the same settings.
    pub prelim: Option<QkOptions>,
    /// Shots per basis state when estimating importances by sampling.
    pub shots: Option<usize>,
    pub seed: u64,
}

impl Default for MrsqkOptions {
    fn default() -> Self {
        Self { d: 2, qk: QkOptions::default(), prelim: None, shots: None, seed: 0 }
    }
}

/// All determinants with the same spatial occupation and `S_z` as `det`:
/// doubly occupied orbitals stay, open shells take every arrangement of
/// the same number of α electrons. Ascending.
pub fn spin_complete(det: BasisAddress, n_spatial: usize) -> Vec<BasisAddress> {
    let b = det.bits();
    let mut doubles = 0u64;
    let mut open = Vec::new();
    let mut n_alpha_open = 0;
    for p in 0..n_spatial {
        let (a, bb) = (b >> (2 * p) & 1, b >> (2 * p + 1) & 1);
        match (a, bb) {
            (1, 1) => doubles |= 0b11 << (2 * p),
            (1, 0) => {
                open.push(p);
                n_alpha_open += 1;
            }
            (0, 1) => open.push(p),
            _ => {}
        }
    }
    let mut out = Vec::new();
    for mask in 0u64..1 << open.len() {
        if mask.count_ones() as usize != n_alpha_open {
            continue;
        }
        let mut bits = doubles;
        for (k, &p) in open.iter().enumerate() {
            bits |= if mask >> k & 1 == 1 { 1 << (2 * p) } else { 1 << (2 * p + 1) };
        }
        out.push(BasisAddress(bits));
    }
    out.sort();
    out
}

/// `P_μ ≈ Σ_α |⟨φ_μ|ψ_α⟩|² |c_α|²` over the preliminary basis states.
fn importances(
    system: &MolecularSystem,
    prelim: &QkOptions,
    result: &QkResult,
    shots: Option<usize>,
    seed: u64,
) -> Result<HashMap<u64, f64>> {
    let propagator = match prelim.evolution {
        KrylovEvolution::Exact => Some(SpectralPropagator::new(system.hamiltonian(), system.n_qubits())?),
        _ => None,
    };
    let (basis, _) = build_basis(system, &result.references, prelim, propagator.as_ref())?;
    let mut p: HashMap<u64, f64> = HashMap::new();
    for (k, (b, c)) in basis.iter().zip(&result.subspace.ground_vector).enumerate() {
        let w = c.norm_sqr();
        match shots {
            None => {
                for (addr, a) in b.state.amplitudes().iter().enumerate() {
                    let pr = a.norm_sqr();
                    if pr > 1e-16 {
                        *p.entry(addr as u64).or_default() += pr * w;
                    }
                }
            }
            Some(m) => {
                for addr in b.state.sample_basis_states(m, seed.wrapping_add(k as u64))? {
                    *p.entry(addr.bits()).or_default() += w / m as f64;
                }
            }
        }
    }
    Ok(p)
}

/// Reference selection: rank by importance, then add each determinant
/// together with its spin-complete partners until at least `d` are held.
pub fn select_references(p: &HashMap<u64, f64>, d: usize, n_spatial: usize) -> Result<Vec<BasisAddress>> {
    let mut ranked: Vec<(u64, f64)> = p.iter().filter(|(_, &v)| v > 0.0).map(|(&k, &v)| (k, v)).collect();
    if ranked.len() < d {
        return Err(Error::InvalidArgument(format!(
            "only {} determinants have nonzero importance, {d} references requested",
            ranked.len()
        )));
    }
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let mut refs: Vec<BasisAddress> = Vec::new();
    for (bits, _) in ranked {
        if refs.len() >= d {
            break;
        }
        if refs.iter().any(|r| r.bits() == bits) {
            continue;
        }
        for partner in spin_complete(BasisAddress(bits), n_spatial) {
            if !refs.contains(&partner) {
                refs.push(partner);
            }
        }
    }
    Ok(refs)
}

/// Multireference selected Krylov. The reference list may exceed `d` when
/// the last open-shell pattern needs its spin partners.
pub fn run_mrsqk(system: &MolecularSystem, opts: &MrsqkOptions) -> Result<QkResult> {
    if opts.d == 0 {
        return Err(Error::InvalidArgument("at least one reference is required".into()));
    }
    let prelim = opts.prelim.clone().unwrap_or_else(|| opts.qk.clone());
    let first = run_qk(system, &prelim)?;
    let p = importances(system, &prelim, &first, opts.shots, opts.seed)?;
    let refs = select_references(&p, opts.d, system.n_spatial())?;
    let mut r = solve_subspace(system, refs, &opts.qk)?;
    r.report.n_pauli_evaluations += first.report.n_pauli_evaluations;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::fci_oracle;
    use crate::system::Integrals;

    fn toy() -> MolecularSystem {
        let mut ints = Integrals::zeros(2);
        ints.set_h(0, 0, -1.25);
        ints.set_h(1, 1, -0.48);
        ints.set_g(0, 0, 0, 0, 0.67);
        ints.set_g(1, 1, 1, 1, 0.70);
        ints.set_g(0, 0, 1, 1, 0.66);
        ints.set_g(0, 1, 0, 1, 0.18);
        MolecularSystem::from_integrals(ints, 2, 0, 0.71, None).unwrap()
    }

    #[test]
    fn s_zero_is_reference_energy() {
        let sys = toy();
        let r = run_qk(&sys, &QkOptions { s: 0, ..Default::default() }).unwrap();
        assert!((r.energy() - sys.hf_energy()).abs() < 1e-12);
    }

    #[test]
    fn exact_evolution_overlap_is_toeplitz() {
        let sys = toy();
        let opts = QkOptions { s: 3, evolution: KrylovEvolution::Exact, ..Default::default() };
        let r = run_qk(&sys, &opts).unwrap();
        let s = &r.subspace.s;
        for i in 0..3 {
            for j in 0..3 {
                assert!((s[(i, j)] - s[(i + 1, j + 1)]).norm() < 1e-12);
            }
        }
        let fci = fci_oracle(sys.hamiltonian(), 4, Some(2)).unwrap();
        assert!(r.energy() >= fci.energy - 1e-9);
    }

    #[test]
    fn hadamard_test_matches_direct() {
        let sys = toy();
        let a = run_qk(&sys, &QkOptions { s: 2, ..Default::default() }).unwrap();
        let b = run_qk(&sys, &QkOptions { s: 2, method: ElementMethod::HadamardTest, ..Default::default() }).unwrap();
        let diff = (&a.subspace.h - &b.subspace.h).iter().map(|x| x.norm()).fold(0.0, f64::max);
        assert!(diff < 1e-10);
        assert!((a.energy() - b.energy()).abs() < 1e-9);
    }

    #[test]
    fn spin_completion_adds_partner() {
        // alpha in orbital 0, beta in orbital 1
        let det = BasisAddress::from_occupied(&[0, 3]);
        let all = spin_complete(det, 2);
        assert_eq!(all, vec![BasisAddress::from_occupied(&[1, 2]), BasisAddress::from_occupied(&[0, 3])]);
        let closed = BasisAddress::from_occupied(&[0, 1]);
        assert_eq!(spin_complete(closed, 2), vec![closed]);
    }

    #[test]
    fn single_reference_reduces_to_qk() {
        let sys = toy();
        let qk = run_qk(&sys, &QkOptions { s: 2, ..Default::default() }).unwrap();
        let mr = run_mrsqk(&sys, &MrsqkOptions { d: 1, qk: QkOptions { s: 2, ..Default::default() }, ..Default::default() }).unwrap();
        assert_eq!(mr.references, vec![sys.hf_reference()]);
        assert!((qk.energy() - mr.energy()).abs() < 1e-12);
    }

    #[test]
    fn too_many_references_rejected() {
        let p: HashMap<u64, f64> = [(3u64, 1.0)].into_iter().collect();
        assert!(select_references(&p, 2, 2).is_err());
    }
}
