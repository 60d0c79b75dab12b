//! Second-quantized and qubit Hamiltonians from spatial integrals.

use crate::basis::BasisAddress;
use crate::fermion::{jw_transform, SqOperator};
use crate::pauli::QubitOperator;
use crate::system::Integrals;

/// `⟨PQ|RS⟩` over spin orbitals from chemist-notation spatial integrals.
fn physicist(ints: &Integrals, p: usize, q: usize, r: usize, s: usize) -> f64 {
    if p % 2 != r % 2 || q % 2 != s % 2 {
        return 0.0;
    }
    ints.g(p / 2, r / 2, q / 2, s / 2)
}

/// Antisymmetrized `⟨PQ||RS⟩ = ⟨PQ|RS⟩ − ⟨PQ|SR⟩`.
pub(crate) fn antisymmetrized(ints: &Integrals, p: usize, q: usize, r: usize, s: usize) -> f64 {
    physicist(ints, p, q, r, s) - physicist(ints, p, q, s, r)
}

/// `E_nuc + Σ h_PQ a†_P a_Q + ¼ Σ ⟨PQ||RS⟩ a†_P a†_Q a_S a_R`.
pub fn build_sq_hamiltonian(ints: &Integrals, e_nuclear: f64) -> SqOperator {
    let m = 2 * ints.n_spatial();
    let mut op = SqOperator::new();
    if e_nuclear != 0.0 {
        op.add_term(e_nuclear, &[], &[]).expect("empty term");
    }
    for p in 0..m {
        for q in 0..m {
            if p % 2 == q % 2 {
                let v = ints.h(p / 2, q / 2);
                if v != 0.0 {
                    op.add_term(v, &[p], &[q]).expect("single indices");
                }
            }
        }
    }
    for p in 0..m {
        for q in 0..m {
            if p == q {
                continue;
            }
            for r in 0..m {
                for s in 0..m {
                    if r == s {
                        continue;
                    }
                    let v = antisymmetrized(ints, p, q, r, s);
                    if v != 0.0 {
                        op.add_term(0.25 * v, &[p, q], &[s, r]).expect("distinct indices");
                    }
                }
            }
        }
    }
    op.simplify()
}

/// Jordan–Wigner image of a second-quantized Hamiltonian.
pub fn build_qubit_hamiltonian(sq: &SqOperator) -> QubitOperator {
    jw_transform(sq)
}

/// Diagonal of the Fock operator built on `reference`, per spin orbital:
/// `f_PP = h_pp + Σ_{J occ} ⟨PJ||PJ⟩`.
pub(crate) fn fock_diagonal(ints: &Integrals, reference: BasisAddress) -> Vec<f64> {
    let m = 2 * ints.n_spatial();
    let occ = reference.occupied();
    (0..m)
        .map(|p| {
            ints.h(p / 2, p / 2) + occ.iter().map(|&j| antisymmetrized(ints, p, j, p, j)).sum::<f64>()
        })
        .collect()
}

/// Closed-shell energy `Σ 2h_ii + Σ_ij [2(ii|jj) − (ij|ji)] + E_nuc` over
/// the `n_occ` lowest spatial orbitals.
pub fn rhf_energy(ints: &Integrals, n_occ: usize, e_nuclear: f64) -> f64 {
    let mut e = e_nuclear;
    for i in 0..n_occ {
        e += 2.0 * ints.h(i, i);
        for j in 0..n_occ {
            e += 2.0 * ints.g(i, i, j, j) - ints.g(i, j, j, i);
        }
    }
    e
}
