//! Randomized invariants checked against the dense reference constructions.

use molqs::dynamics::{exact_evolve, trotter_circuit, EvolutionSpec};
use molqs::exponentiate::exponentiate_pauli_string;
use molqs::fermion::SqOperator;
use molqs::oracle::{
    annihilator_matrix, circuit_unitary, creator_matrix, expm, max_abs_diff, operator_matrix,
    sq_operator_matrix,
};
use molqs::solvers::{solve_generalized_eig, GeneralizedEigProblem};
use molqs::{Circuit, Gate, GateKind, Pauli, PauliString, QubitOperator, StateVector};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use proptest::prelude::*;

const ONE_QUBIT: &[GateKind] = &[
    GateKind::I,
    GateKind::X,
    GateKind::Y,
    GateKind::Z,
    GateKind::H,
    GateKind::S,
    GateKind::Sdg,
    GateKind::T,
    GateKind::Tdg,
    GateKind::V,
    GateKind::AdjV,
    GateKind::Rx,
    GateKind::Ry,
    GateKind::Rz,
    GateKind::R,
];
const TWO_QUBIT: &[GateKind] = &[GateKind::Cnot, GateKind::Cz, GateKind::CR, GateKind::Swap];

fn gate(n: usize) -> impl Strategy<Value = Gate> {
    let single = (0..ONE_QUBIT.len(), 0..n, -6.3f64..6.3).prop_map(|(k, t, a)| {
        let kind = ONE_QUBIT[k];
        Gate::new(kind, t, None, kind.is_parametric().then_some(a)).unwrap()
    });
    let pair = (0..TWO_QUBIT.len(), 0..n, 1..n.max(2), -6.3f64..6.3).prop_map(move |(k, t, off, a)| {
        let kind = TWO_QUBIT[k];
        let c = (t + off) % n;
        Gate::new(kind, t, Some(c), kind.is_parametric().then_some(a)).unwrap()
    });
    if n == 1 {
        single.boxed()
    } else {
        prop_oneof![3 => single, 2 => pair].boxed()
    }
}

fn circuit() -> impl Strategy<Value = (usize, Circuit)> {
    (1usize..=6).prop_flat_map(|n| (Just(n), prop::collection::vec(gate(n), 0..50).prop_map(Circuit::from_gates)))
}

fn pauli_string(n: usize) -> impl Strategy<Value = PauliString> {
    prop::collection::vec(0u8..4, n).prop_map(|v| {
        let f: Vec<(usize, Pauli)> = v
            .iter()
            .enumerate()
            .filter_map(|(q, &p)| match p {
                1 => Some((q, Pauli::X)),
                2 => Some((q, Pauli::Y)),
                3 => Some((q, Pauli::Z)),
                _ => None,
            })
            .collect();
        PauliString::new(&f).unwrap()
    })
}

fn operator(n: usize, hermitian: bool) -> impl Strategy<Value = QubitOperator> {
    prop::collection::vec((pauli_string(n), -1.0f64..1.0, -1.0f64..1.0), 1..8).prop_map(move |terms| {
        QubitOperator::from_terms(
            terms
                .into_iter()
                .map(|(s, re, im)| (Complex64::new(re, if hermitian { 0.0 } else { im }), s))
                .collect(),
        )
    })
}

fn random_state(n: usize) -> impl Strategy<Value = StateVector> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n).prop_map(|v| {
        let mut s = StateVector::from_amplitudes(v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).unwrap();
        s.normalize();
        s
    })
}

fn as_vector(s: &StateVector) -> DVector<Complex64> {
    DVector::from_column_slice(s.amplitudes())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn simulator_matches_matrix_chain((n, c) in circuit()) {
        let mut s = StateVector::new(n).unwrap();
        s.apply_circuit(&c).unwrap();
        let u = circuit_unitary(&c, n);
        let expected = u.column(0);
        let err = s.amplitudes().iter().zip(expected.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(err < 1e-12, "deviation {err}");
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn adjoint_undoes_circuit((n, c) in circuit()) {
        let mut s = StateVector::new(n).unwrap();
        s.apply_circuit(&c).unwrap();
        s.apply_circuit(&c.adjoint()).unwrap();
        prop_assert!((s.amplitudes()[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn specialized_kernels_match_generic((n, c) in circuit(), seed in any::<u64>()) {
        let mut a = StateVector::new(n).unwrap();
        a.apply_gate(&Gate::single(GateKind::H, (seed % n as u64) as usize)).unwrap();
        let mut b = a.clone();
        for g in c.gates() {
            a.apply_gate(g).unwrap();
            b.apply_gate_generic(g).unwrap();
        }
        let err = a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        prop_assert!(err < 1e-13);
    }

    #[test]
    fn rz_rotations_compose(a in -6.0f64..6.0, b in -6.0f64..6.0, s in random_state(2)) {
        let mut x = s.clone();
        x.apply_gate(&Gate::rotation(GateKind::Rz, 1, a)).unwrap();
        x.apply_gate(&Gate::rotation(GateKind::Rz, 1, b)).unwrap();
        let mut y = s.clone();
        y.apply_gate(&Gate::rotation(GateKind::Rz, 1, b)).unwrap();
        y.apply_gate(&Gate::rotation(GateKind::Rz, 1, a)).unwrap();
        let mut z = s;
        z.apply_gate(&Gate::rotation(GateKind::Rz, 1, a + b)).unwrap();
        for ((p, q), r) in x.amplitudes().iter().zip(y.amplitudes()).zip(z.amplitudes()) {
            prop_assert!((p - q).norm() < 1e-14 && (p - r).norm() < 1e-14);
        }
    }

    #[test]
    fn pauli_exponential_matches_expm(s in pauli_string(4), theta in -3.0f64..3.0) {
        let (c, phase) = exponentiate_pauli_string(Complex64::new(0.0, -theta), &s).unwrap();
        let u = circuit_unitary(&c, 4) * phase;
        let p = operator_matrix(&QubitOperator::from_terms(vec![(Complex64::new(1.0, 0.0), s)]), 4);
        let e = expm(&(p * Complex64::new(0.0, -theta)));
        prop_assert!(max_abs_diff(&u, &e) < 1e-12);
        prop_assert_eq!(c.n_cnot(), 2 * s.weight().saturating_sub(1));
    }

    #[test]
    fn operator_algebra_matches_matrices(a in operator(3, false), b in operator(3, false)) {
        let (ma, mb) = (operator_matrix(&a, 3), operator_matrix(&b, 3));
        prop_assert!(max_abs_diff(&operator_matrix(&a.multiply(&b), 3), &(&ma * &mb)) < 1e-12);
        prop_assert!(max_abs_diff(&operator_matrix(&a.commutator(&b), 3), &(&ma * &mb - &mb * &ma)) < 1e-12);
        prop_assert!(max_abs_diff(&operator_matrix(&a.adjoint(), 3), &ma.adjoint()) < 1e-12);
    }

    #[test]
    fn simplify_is_idempotent(a in operator(4, false)) {
        let once = a.simplify();
        prop_assert_eq!(once.simplify(), once.clone());
        prop_assert!(max_abs_diff(&operator_matrix(&once, 4), &operator_matrix(&a, 4)) < 1e-13);
    }

    #[test]
    fn expectation_matches_dense(op in operator(3, true), s in random_state(3)) {
        let v = as_vector(&s);
        let dense = (v.adjoint() * operator_matrix(&op, 3) * &v)[(0, 0)];
        let e = s.expectation(&op).unwrap();
        prop_assert!((e - dense).norm() < 1e-12);
        prop_assert!(e.im.abs() < 1e-12);
    }

    #[test]
    fn jordan_wigner_matches_ladder_products(
        terms in prop::collection::vec((prop::collection::btree_set(0usize..5, 0..3), prop::collection::btree_set(0usize..5, 0..3), -1.0f64..1.0), 1..4)
    ) {
        let mut op = SqOperator::new();
        for (cre, ann, c) in &terms {
            let cre: Vec<usize> = cre.iter().copied().collect();
            let ann: Vec<usize> = ann.iter().copied().collect();
            op.add_term(*c, &cre, &ann).unwrap();
        }
        let jw = operator_matrix(&op.jw_transform(), 5);
        prop_assert!(max_abs_diff(&jw, &sq_operator_matrix(&op, 5)) < 1e-12);
    }

    #[test]
    fn anticommutation(p in 0usize..5, q in 0usize..5) {
        let (a, ad) = (annihilator_matrix(p, 5), creator_matrix(q, 5));
        let anti = &a * &ad + &ad * &a;
        let expected = if p == q { DMatrix::identity(32, 32) } else { DMatrix::zeros(32, 32) };
        prop_assert!(max_abs_diff(&anti, &expected) < 1e-13);
    }

    #[test]
    fn trotter_error_shrinks_with_steps(h in operator(4, true), t in 0.1f64..1.0) {
        let mut exact = StateVector::new(4).unwrap();
        exact.apply_gate(&Gate::single(GateKind::H, 0)).unwrap();
        let start = exact.clone();
        exact_evolve(&h, t, &mut exact).unwrap();
        let mut prev = f64::INFINITY;
        for r in [1, 2, 4, 8, 16] {
            let mut s = start.clone();
            s.apply_circuit(&trotter_circuit(&h, &EvolutionSpec::trotter(t, r)).unwrap()).unwrap();
            let err = s.amplitudes().iter().zip(exact.amplitudes()).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
            prop_assert!(err <= prev + 1e-12, "r={r}: {err} > {prev}");
            prev = err;
        }
    }

    #[test]
    fn generalized_eigenvalues_are_rayleigh_bounded(
        raw in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 16),
        h in operator(2, true),
    ) {
        // S = B†B is positive definite almost surely; H is Hermitian.
        let b = DMatrix::from_iterator(4, 4, raw.into_iter().map(|(a, c)| Complex64::new(a, c)));
        let s = b.adjoint() * &b + DMatrix::identity(4, 4) * Complex64::new(0.1, 0.0);
        let hm = operator_matrix(&h, 2);
        let sol = solve_generalized_eig(&GeneralizedEigProblem::new(hm.clone(), s.clone())).unwrap();
        for k in 0..sol.eigenvalues.len() {
            let c = sol.eigenvectors.column(k);
            let lhs = &hm * c;
            let rhs = (&s * c) * Complex64::new(sol.eigenvalues[k], 0.0);
            prop_assert!((lhs - rhs).norm() < 1e-9);
        }
        prop_assert!(sol.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn sampling_is_deterministic(s in random_state(3), seed in any::<u64>()) {
        prop_assert_eq!(s.sample_basis_states(50, seed).unwrap(), s.sample_basis_states(50, seed).unwrap());
    }
}
