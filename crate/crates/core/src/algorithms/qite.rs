//! Quantum imaginary-time evolution and the Lanczos subspace built from
//! its trajectory.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exponentiate::exponentiate_pauli_string;
use crate::pauli::{PauliString, QubitOperator};
use crate::solvers::{solve_generalized_eig, solve_linear_regularized, GeneralizedEigProblem, DEFAULT_RIDGE};
use crate::state::StateVector;
use crate::system::{build_pool, MolecularSystem, PoolKind};

use super::ucc::overlap;
use super::{ResourceReport, SubspaceResult};

/// How the per-step norm `N = ⟨ψ|e^{−2ΔβH}|ψ⟩` is estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NormApprox {
    /// `1 − 2Δβ⟨H⟩`.
    FirstOrder,
    /// `1 − 2Δβ⟨H⟩ + 2Δβ²⟨H²⟩`. The Lanczos overlaps are products of these
    /// factors, so the extra term keeps the subspace energies variational.
    #[default]
    SecondOrder,
}

#[derive(Debug, Clone)]
pub struct QiteOptions {
    pub dbeta: f64,
    pub beta_max: f64,
    pub pool: PoolKind,
    pub ridge: f64,
    pub norm: NormApprox,
}

impl Default for QiteOptions {
    fn default() -> Self {
        Self { dbeta: 0.1, beta_max: 10.0, pool: PoolKind::SD, ridge: DEFAULT_RIDGE, norm: NormApprox::default() }
    }
}

#[derive(Debug, Clone)]
pub struct QiteResult {
    pub energy: f64,
    /// `E(β_n)` for `β_n = nΔβ`, `n = 0…M`.
    pub energies: Vec<f64>,
    /// Norm factor of step `n` (taking `β_n` to `β_{n+1}`).
    pub norms: Vec<f64>,
    pub dbeta: f64,
    pub report: ResourceReport,
}

/// Unique Pauli strings with an odd number of Y factors from the
/// Jordan–Wigner images of the pool generators, in string order.
pub fn qite_pauli_pool(system: &MolecularSystem, kind: PoolKind) -> Result<Vec<PauliString>> {
    let pool = build_pool(system, kind)?;
    let set: BTreeSet<PauliString> = pool
        .entries()
        .iter()
        .flat_map(|e| e.qubit_generator.terms().iter().map(|(_, s)| *s))
        .filter(|s| s.n_y() % 2 == 1)
        .collect();
    Ok(set.into_iter().collect())
}

fn single(s: &PauliString) -> QubitOperator {
    QubitOperator::from_terms(vec![(Complex64::new(1.0, 0.0), *s)])
}

pub fn run_qite(system: &MolecularSystem, opts: &QiteOptions) -> Result<QiteResult> {
    if !(opts.dbeta > 0.0) {
        return Err(Error::InvalidArgument("dbeta must be positive".into()));
    }
    let rho = qite_pauli_pool(system, opts.pool)?;
    let rho_ops: Vec<QubitOperator> = rho.iter().map(single).collect();
    let h = system.hamiltonian();
    let n_ps = system.n_pauli_strings();
    let m = rho.len();
    let n_steps = (opts.beta_max / opts.dbeta).round() as usize;
    let db = opts.dbeta;

    let mut psi = system.reference_state()?;
    let mut report = ResourceReport { n_parameters: m, ..Default::default() };
    let mut energies = vec![psi.energy(h)?];
    report.n_pauli_evaluations += n_ps;
    let mut norms = Vec::with_capacity(n_steps);
    for _ in 0..n_steps {
        let e = *energies.last().expect("seeded");
        let h_psi = psi.apply_operator(h)?;
        let n = match opts.norm {
            NormApprox::FirstOrder => 1.0 - 2.0 * db * e,
            NormApprox::SecondOrder => 1.0 - 2.0 * db * e + 2.0 * db * db * h_psi.norm_sqr(),
        };
        if !(n > 0.0) {
            return Err(Error::Numerical(format!("norm estimate {n} is not positive; reduce dbeta")));
        }
        norms.push(n);
        let rho_psi: Vec<StateVector> =
            rho_ops.iter().map(|r| psi.apply_operator(r)).collect::<Result<_>>()?;
        let s = DMatrix::from_fn(m, m, |i, j| Complex64::new(overlap(&rho_psi[i], &rho_psi[j]).re, 0.0));
        let scale = Complex64::new(0.0, -1.0 / n.sqrt());
        let b = DVector::from_fn(m, |i, _| Complex64::new((scale * overlap(&rho_psi[i], &h_psi)).re, 0.0));
        let alpha = solve_linear_regularized(&s, &b, opts.ridge)?;
        for (a, r) in alpha.iter().zip(&rho) {
            let (c, phase) = exponentiate_pauli_string(Complex64::new(0.0, -db * a.re), r)?;
            psi.apply_circuit(&c.with_global_phase(phase))?;
        }
        energies.push(psi.energy(h)?);
        report.n_pauli_evaluations += n_ps * (m + 1) + m * (m + 1) / 2;
        if opts.norm == NormApprox::SecondOrder {
            report.n_pauli_evaluations += n_ps * n_ps;
        }
        report.n_iterations += 1;
        report.n_cnot += rho.iter().map(|r| 2 * (r.weight() - 1)).sum::<usize>();
    }
    let energy = *energies.last().expect("seeded");
    report.final_energy = energy;
    Ok(QiteResult { energy, energies, norms, dbeta: db, report })
}

/// Lanczos subspace over the even-indexed QITE states `ψ(β_{2j})`, with
/// `S_mn = n_k²/(n_m n_n)` and `H_mn = S_mn E_k` for `2k = m + n`, where
/// `n_m² = ∏_{j<m} N_j`. Uses states up to `β ≤ beta_max`.
pub fn run_qlanczos(qite: &QiteResult, beta_max: f64, trim_threshold: f64) -> Result<SubspaceResult> {
    let last = ((beta_max / qite.dbeta).round() as usize).min(qite.energies.len() - 1);
    let idx: Vec<usize> = (0..=last).step_by(2).collect();
    // ln n_m² as a running sum keeps long trajectories from underflowing.
    let mut log_n2 = vec![0.0; last + 1];
    for m in 1..=last {
        log_n2[m] = log_n2[m - 1] + qite.norms[m - 1].ln();
    }
    let d = idx.len();
    let mut s = DMatrix::<Complex64>::zeros(d, d);
    let mut hm = DMatrix::<Complex64>::zeros(d, d);
    for (a, &m) in idx.iter().enumerate() {
        for (b, &n) in idx.iter().enumerate() {
            let k = (m + n) / 2;
            let v = (log_n2[k] - 0.5 * (log_n2[m] + log_n2[n])).exp();
            s[(a, b)] = Complex64::new(v, 0.0);
            hm[(a, b)] = Complex64::new(v * qite.energies[k], 0.0);
        }
    }
    let sol = solve_generalized_eig(&GeneralizedEigProblem::new(hm.clone(), s.clone()).with_trim(trim_threshold))?;
    Ok(SubspaceResult {
        ground_vector: sol.eigenvectors.column(0).iter().copied().collect(),
        s,
        h: hm,
        energies: sol.eigenvalues,
        retained_dim: sol.retained_dim,
    })
}
