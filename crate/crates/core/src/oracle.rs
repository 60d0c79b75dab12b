//! Reference constructions for verification.
//!
//! Everything here is built from first principles (Kronecker products of
//! 2x2 matrices, occupation-number sign rules, Taylor series) and shares no
//! code path with the simulator kernels, the Pauli algebra, or the
//! Jordan–Wigner transform it is used to check. Dense, so only suitable
//! for small registers.

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;

use crate::circuit::Circuit;
use crate::fermion::SqOperator;
use crate::gate::{Gate, GateKind};
use crate::pauli::{Pauli, PauliString, QubitOperator};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `factors[n-1] ⊗ … ⊗ factors[0]`: qubit 0 is the least significant index.
pub fn kron_qubits(factors: &[Matrix2<Complex64>]) -> DMatrix<Complex64> {
    let mut out = DMatrix::from_element(1, 1, c(1.0, 0.0));
    for f in factors {
        let f = DMatrix::from_iterator(2, 2, f.iter().copied());
        out = f.kronecker(&out);
    }
    out
}

fn identity2() -> Matrix2<Complex64> {
    Matrix2::identity()
}

fn projector_one() -> Matrix2<Complex64> {
    Matrix2::new(c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0))
}

pub fn pauli_matrix(p: Pauli) -> Matrix2<Complex64> {
    let (z, o, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    match p {
        Pauli::X => Matrix2::new(z, o, o, z),
        Pauli::Y => Matrix2::new(z, -i, i, z),
        Pauli::Z => Matrix2::new(o, z, z, -o),
    }
}

pub fn pauli_string_matrix(s: &PauliString, n_qubits: usize) -> DMatrix<Complex64> {
    let factors: Vec<_> = (0..n_qubits)
        .map(|q| s.get(q).map_or_else(identity2, pauli_matrix))
        .collect();
    kron_qubits(&factors)
}

pub fn operator_matrix(op: &QubitOperator, n_qubits: usize) -> DMatrix<Complex64> {
    let dim = 1 << n_qubits;
    let mut m = DMatrix::zeros(dim, dim);
    for (coef, s) in op.terms() {
        m += pauli_string_matrix(s, n_qubits) * *coef;
    }
    m
}

/// Full unitary of a gate on `n_qubits`, assembled as
/// `(1 − P) + P·U_target` with `P` the projector onto all controls set.
pub fn gate_unitary(gate: &Gate, n_qubits: usize) -> DMatrix<Complex64> {
    let dim = 1usize << n_qubits;
    if gate.kind() == GateKind::Swap {
        let a = gate.target();
        let b = gate.control().expect("swap partner");
        let pair = |p: Pauli| {
            (0..n_qubits)
                .map(|k| if k == a || k == b { pauli_matrix(p) } else { identity2() })
                .collect::<Vec<_>>()
        };
        // SWAP = ½(I + XX + YY + ZZ)
        let mut m = DMatrix::<Complex64>::identity(dim, dim);
        for p in [Pauli::X, Pauli::Y, Pauli::Z] {
            m += kron_qubits(&pair(p));
        }
        m *= c(0.5, 0.0);
        let mask = gate.control_mask();
        if mask == 0 {
            return m;
        }
        let proj = controls_projector(mask, n_qubits);
        return DMatrix::identity(dim, dim) - &proj + &proj * m;
    }
    let target: Vec<_> = (0..n_qubits)
        .map(|q| if q == gate.target() { gate.matrix() } else { identity2() })
        .collect();
    let u = kron_qubits(&target);
    let mask = gate.control_mask();
    if mask == 0 {
        return u;
    }
    let proj = controls_projector(mask, n_qubits);
    DMatrix::identity(dim, dim) - &proj + &proj * u
}

fn controls_projector(mask: u64, n_qubits: usize) -> DMatrix<Complex64> {
    let f: Vec<_> = (0..n_qubits)
        .map(|q| if mask >> q & 1 == 1 { projector_one() } else { identity2() })
        .collect();
    kron_qubits(&f)
}

/// Matrix-chain product of a circuit, including its global phase.
pub fn circuit_unitary(circuit: &Circuit, n_qubits: usize) -> DMatrix<Complex64> {
    let dim = 1usize << n_qubits;
    let mut u = DMatrix::<Complex64>::identity(dim, dim);
    for g in circuit.gates() {
        u = gate_unitary(g, n_qubits) * u;
    }
    u * circuit.global_phase()
}

/// Fermionic annihilator `a_p` on `n_modes` modes in the occupation basis:
/// `a_p|n⟩ = (−1)^{Σ_{q<p} n_q} |n − e_p⟩` when mode p is occupied.
pub fn annihilator_matrix(p: usize, n_modes: usize) -> DMatrix<Complex64> {
    let dim = 1usize << n_modes;
    let mut m = DMatrix::zeros(dim, dim);
    for n in 0..dim {
        if n >> p & 1 == 1 {
            let below = (n & ((1 << p) - 1)).count_ones();
            let sign = if below % 2 == 0 { 1.0 } else { -1.0 };
            m[(n ^ (1 << p), n)] = c(sign, 0.0);
        }
    }
    m
}

pub fn creator_matrix(p: usize, n_modes: usize) -> DMatrix<Complex64> {
    annihilator_matrix(p, n_modes).adjoint()
}

/// Matrix of a second-quantized operator built by multiplying ladder matrices.
pub fn sq_operator_matrix(op: &SqOperator, n_modes: usize) -> DMatrix<Complex64> {
    let dim = 1usize << n_modes;
    let mut m = DMatrix::zeros(dim, dim);
    for t in op.terms() {
        let mut prod = DMatrix::<Complex64>::identity(dim, dim);
        for &p in &t.creators {
            prod *= creator_matrix(p, n_modes);
        }
        for &q in &t.annihilators {
            prod *= annihilator_matrix(q, n_modes);
        }
        m += prod * t.coeff;
    }
    m
}

/// `exp(A)` by scaling and squaring a truncated Taylor series.
pub fn expm(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = a.nrows();
    let norm: f64 = a.iter().map(|x| x.norm()).sum::<f64>().max(1e-300);
    let squarings = (norm.log2().ceil().max(0.0) as u32) + 1;
    let scaled = a / c(2f64.powi(squarings as i32), 0.0);
    let mut result = DMatrix::<Complex64>::identity(n, n);
    let mut term = DMatrix::<Complex64>::identity(n, n);
    for k in 1..40 {
        term = &term * &scaled / c(k as f64, 0.0);
        result += &term;
        if term.iter().map(|x| x.norm()).sum::<f64>() < 1e-20 {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// Largest absolute entry of `a − b`.
pub fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
