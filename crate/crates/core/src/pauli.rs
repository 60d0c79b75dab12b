//! Pauli strings and linear combinations of them.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Coefficients with modulus below this are dropped by [`QubitOperator::simplify`].
pub const PRUNE_THRESHOLD: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    fn from_bits(x: bool, z: bool) -> Option<Pauli> {
        match (x, z) {
            (true, false) => Some(Pauli::X),
            (true, true) => Some(Pauli::Y),
            (false, true) => Some(Pauli::Z),
            (false, false) => None,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Tensor product of Pauli factors on distinct qubits, identity elsewhere.
///
/// Stored in symplectic form: qubit `q` carries X if bit `q` of `x` is set
/// alone, Z if bit `q` of `z` alone, Y if both. Up to the factor
/// `i^{#Y}` the string equals `X^x Z^z` with Z acting first, which is what
/// the state-vector kernels use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct PauliString {
    x: u64,
    z: u64,
}

impl PauliString {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Builds a string from `(qubit, axis)` factors; qubits must be distinct.
    pub fn new(factors: &[(usize, Pauli)]) -> Result<Self> {
        let mut s = Self::default();
        for &(q, p) in factors {
            if q >= 64 {
                return Err(Error::InvalidOperator(format!("qubit {q} beyond 64")));
            }
            if (s.x | s.z) >> q & 1 == 1 {
                return Err(Error::InvalidOperator(format!("repeated qubit {q} in Pauli string")));
            }
            match p {
                Pauli::X => s.x |= 1 << q,
                Pauli::Y => {
                    s.x |= 1 << q;
                    s.z |= 1 << q;
                }
                Pauli::Z => s.z |= 1 << q,
            }
        }
        Ok(s)
    }

    pub fn single(qubit: usize, pauli: Pauli) -> Self {
        Self::new(&[(qubit, pauli)]).expect("single factor")
    }

    pub fn from_masks(x: u64, z: u64) -> Self {
        Self { x, z }
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    pub fn is_identity(&self) -> bool {
        self.support() == 0
    }

    pub fn weight(&self) -> usize {
        self.support().count_ones() as usize
    }

    pub fn n_y(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    pub fn get(&self, qubit: usize) -> Option<Pauli> {
        Pauli::from_bits(self.x >> qubit & 1 == 1, self.z >> qubit & 1 == 1)
    }

    /// Factors in ascending qubit order.
    pub fn factors(&self) -> Vec<(usize, Pauli)> {
        let mut out = Vec::with_capacity(self.weight());
        let mut m = self.support();
        while m != 0 {
            let q = m.trailing_zeros() as usize;
            out.push((q, self.get(q).expect("qubit in support")));
            m &= m - 1;
        }
        out
    }

    pub fn max_qubit(&self) -> Option<usize> {
        let s = self.support();
        (s != 0).then(|| 63 - s.leading_zeros() as usize)
    }

    /// Applies the string to basis state `b`: returns `(phase, b')` with
    /// `P|b⟩ = phase·|b'⟩`.
    #[inline]
    pub fn apply_to_basis(&self, b: u64) -> (Complex64, u64) {
        let sign_flips = (b & self.z).count_ones();
        let power = (self.n_y() + 2 * sign_flips) % 4;
        (i_power(power), b ^ self.x)
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) % 2 == 0
    }
}

/// `i^k` for k mod 4, exact.
pub(crate) fn i_power(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Product of two strings: `a·b = phase·c` with phase in {±1, ±i}.
pub fn pauli_multiply(a: &PauliString, b: &PauliString) -> (Complex64, PauliString) {
    let c = PauliString { x: a.x ^ b.x, z: a.z ^ b.z };
    let swap_sign = 2 * (a.z & b.x).count_ones();
    let power = 4 * 64 + a.n_y() + b.n_y() + swap_sign - c.n_y();
    (i_power(power), c)
}

impl Ord for PauliString {
    /// Canonical order: by factor list, qubit index first.
    fn cmp(&self, other: &Self) -> Ordering {
        self.factors().cmp(&other.factors())
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "I");
        }
        let parts: Vec<String> =
            self.factors().iter().map(|(q, p)| format!("{}{}", p.symbol(), q)).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// `Σ_ℓ u_ℓ P_ℓ` with complex coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct QubitOperator {
    terms: Vec<(Complex64, PauliString)>,
}

impl QubitOperator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: Vec<(Complex64, PauliString)>) -> Self {
        Self { terms }
    }

    pub fn identity(coeff: f64) -> Self {
        Self::from_terms(vec![(coeff.into(), PauliString::identity())])
    }

    pub fn add_term(&mut self, coeff: impl Into<Complex64>, string: PauliString) {
        self.terms.push((coeff.into(), string));
    }

    pub fn add_operator(&mut self, other: &QubitOperator) {
        self.terms.extend_from_slice(&other.terms);
    }

    pub fn terms(&self) -> &[(Complex64, PauliString)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest qubit index referenced, if any non-identity term exists.
    pub fn max_qubit(&self) -> Option<usize> {
        self.terms.iter().filter_map(|(_, s)| s.max_qubit()).max()
    }

    /// Combines equal strings (keeping first-occurrence order) and drops
    /// coefficients below [`PRUNE_THRESHOLD`].
    pub fn simplify(&self) -> Self {
        let mut index: HashMap<PauliString, usize> = HashMap::new();
        let mut combined: Vec<(Complex64, PauliString)> = Vec::new();
        for &(c, s) in &self.terms {
            match index.get(&s) {
                Some(&i) => combined[i].0 += c,
                None => {
                    index.insert(s, combined.len());
                    combined.push((c, s));
                }
            }
        }
        combined.retain(|(c, _)| c.norm() >= PRUNE_THRESHOLD);
        Self { terms: combined }
    }

    pub fn scaled(&self, factor: impl Into<Complex64>) -> Self {
        let f = factor.into();
        Self { terms: self.terms.iter().map(|&(c, s)| (c * f, s)).collect() }
    }

    pub fn adjoint(&self) -> Self {
        Self { terms: self.terms.iter().map(|&(c, s)| (c.conj(), s)).collect() }
    }

    /// Operator product `self · other`, simplified.
    pub fn multiply(&self, other: &QubitOperator) -> Self {
        let mut out = Vec::with_capacity(self.len() * other.len());
        for &(ca, sa) in &self.terms {
            for &(cb, sb) in &other.terms {
                let (phase, s) = pauli_multiply(&sa, &sb);
                out.push((ca * cb * phase, s));
            }
        }
        Self { terms: out }.simplify()
    }

    /// `[self, other]`, simplified.
    pub fn commutator(&self, other: &QubitOperator) -> Self {
        let mut out = Vec::new();
        for &(ca, sa) in &self.terms {
            for &(cb, sb) in &other.terms {
                if sa.commutes_with(&sb) {
                    continue;
                }
                let (phase, s) = pauli_multiply(&sa, &sb);
                out.push((2.0 * ca * cb * phase, s));
            }
        }
        Self { terms: out }.simplify()
    }

    /// True when the simplified operator equals its adjoint within `tol`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.simplify().terms.iter().all(|(c, _)| c.im.abs() <= tol)
    }

    /// Coefficient of the identity string after simplification.
    pub fn identity_coefficient(&self) -> Complex64 {
        self.terms.iter().filter(|(_, s)| s.is_identity()).map(|(c, _)| *c).sum()
    }

    /// Sum of |u_ℓ|; bounds the operator norm.
    pub fn one_norm(&self) -> f64 {
        self.terms.iter().map(|(c, _)| c.norm()).sum()
    }
}

fn format_coeff(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{:+}", c.re)
    } else if c.re == 0.0 {
        format!("{:+}i", c.im)
    } else {
        format!("+({}{:+}i)", c.re, c.im)
    }
}

/// Renders as `+0.5 X0 Z1 -0.25i Y2 ...`, one term per whitespace group.
impl fmt::Display for QubitOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.terms.iter().map(|(c, s)| format!("{} {}", format_coeff(*c), s)).collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(f: &[(usize, Pauli)]) -> PauliString {
        PauliString::new(f).unwrap()
    }

    #[test]
    fn single_qubit_algebra() {
        let x = ps(&[(0, Pauli::X)]);
        let y = ps(&[(0, Pauli::Y)]);
        let z = ps(&[(0, Pauli::Z)]);
        assert_eq!(pauli_multiply(&x, &y), (Complex64::i(), z));
        assert_eq!(pauli_multiply(&y, &x), (-Complex64::i(), z));
        assert_eq!(pauli_multiply(&y, &z), (Complex64::i(), x));
        assert_eq!(pauli_multiply(&z, &x), (Complex64::i(), y));
        let z1 = ps(&[(1, Pauli::Z)]);
        assert_eq!(pauli_multiply(&z1, &z1), (Complex64::new(1.0, 0.0), PauliString::identity()));
    }

    #[test]
    fn repeated_qubit_rejected() {
        assert!(PauliString::new(&[(1, Pauli::X), (1, Pauli::Z)]).is_err());
    }

    #[test]
    fn basis_action_of_y() {
        let y = ps(&[(0, Pauli::Y)]);
        assert_eq!(y.apply_to_basis(0), (Complex64::i(), 1));
        assert_eq!(y.apply_to_basis(1), (-Complex64::i(), 0));
    }

    #[test]
    fn simplify_combines_and_prunes() {
        let a = ps(&[(0, Pauli::X)]);
        let b = ps(&[(1, Pauli::Z)]);
        let op = QubitOperator::from_terms(vec![
            (1.0.into(), a),
            (0.5.into(), b),
            ((-1.0).into(), a),
            (1e-15.into(), PauliString::identity()),
        ]);
        let s = op.simplify();
        assert_eq!(s.terms(), &[(Complex64::new(0.5, 0.0), b)]);
        assert_eq!(s.simplify(), s);
    }

    #[test]
    fn display_format() {
        let mut op = QubitOperator::new();
        op.add_term(0.5, ps(&[(0, Pauli::X), (1, Pauli::Z), (4, Pauli::Y)]));
        op.add_term(Complex64::new(0.0, -0.25), PauliString::identity());
        assert_eq!(op.to_string(), "+0.5 X0 Z1 Y4 -0.25i I");
    }

    #[test]
    fn canonical_order_by_qubit_then_axis() {
        let mut v = vec![ps(&[(1, Pauli::X)]), ps(&[(0, Pauli::Z)]), ps(&[(0, Pauli::X)])];
        v.sort();
        assert_eq!(v[0], ps(&[(0, Pauli::X)]));
        assert_eq!(v[2], ps(&[(1, Pauli::X)]));
    }
}
