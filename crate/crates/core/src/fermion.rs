//! Second-quantized operators and the Jordan–Wigner encoding.

use std::collections::HashMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{pauli_multiply, PauliString, QubitOperator, PRUNE_THRESHOLD};

/// One normal-ordered product `c · a†_{p1} a†_{p2} … a_{q1} a_{q2} …`.
///
/// Creators and annihilators are each kept in descending index order; the
/// coefficient absorbs the sign of the permutation used to get there.
#[derive(Debug, Clone, PartialEq)]
pub struct SqTerm {
    pub coeff: Complex64,
    pub creators: Vec<usize>,
    pub annihilators: Vec<usize>,
}

/// Sum of normal-ordered creation/annihilation strings.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SqOperator {
    terms: Vec<SqTerm>,
}

/// Sorts `indices` descending; returns the permutation parity as ±1, or an
/// error on repeated indices.
fn sort_descending(indices: &mut [usize]) -> Result<f64> {
    let mut sign = 1.0;
    for i in 1..indices.len() {
        let mut j = i;
        while j > 0 && indices[j - 1] < indices[j] {
            indices.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if indices.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidOperator(format!("repeated ladder index in {indices:?}")));
    }
    Ok(sign)
}

impl SqOperator {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `coeff · a†_{creators[0]} a†_{creators[1]} … a_{annihilators[0]} …`.
    pub fn add_term(
        &mut self,
        coeff: impl Into<Complex64>,
        creators: &[usize],
        annihilators: &[usize],
    ) -> Result<()> {
        let mut cre = creators.to_vec();
        let mut ann = annihilators.to_vec();
        let sign = sort_descending(&mut cre)? * sort_descending(&mut ann)?;
        self.terms.push(SqTerm { coeff: coeff.into() * sign, creators: cre, annihilators: ann });
        Ok(())
    }

    /// Adds a product given as a left-to-right sequence of `(index, is_creator)`
    /// ladder operators. Sequences that are not normal-ordered are rejected.
    pub fn add_sequence(&mut self, coeff: impl Into<Complex64>, ops: &[(usize, bool)]) -> Result<()> {
        let first_annihilator = ops.iter().position(|&(_, c)| !c).unwrap_or(ops.len());
        if ops[first_annihilator..].iter().any(|&(_, c)| c) {
            return Err(Error::InvalidOperator(
                "term is not normal-ordered (creator right of an annihilator)".into(),
            ));
        }
        let creators: Vec<usize> = ops[..first_annihilator].iter().map(|&(p, _)| p).collect();
        let annihilators: Vec<usize> = ops[first_annihilator..].iter().map(|&(p, _)| p).collect();
        self.add_term(coeff, &creators, &annihilators)
    }

    pub fn add_operator(&mut self, other: &SqOperator) {
        self.terms.extend_from_slice(&other.terms);
    }

    pub fn terms(&self) -> &[SqTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.terms
            .iter()
            .flat_map(|t| t.creators.iter().chain(&t.annihilators))
            .copied()
            .max()
    }

    pub fn scaled(&self, factor: impl Into<Complex64>) -> Self {
        let f = factor.into();
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| SqTerm { coeff: t.coeff * f, ..t.clone() })
                .collect(),
        }
    }

    /// Hermitian adjoint, re-normal-ordered.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::new();
        for t in &self.terms {
            // (a†_P a_Q)† = a†_{rev Q} a_{rev P}
            let cre: Vec<usize> = t.annihilators.iter().rev().copied().collect();
            let ann: Vec<usize> = t.creators.iter().rev().copied().collect();
            out.add_term(t.coeff.conj(), &cre, &ann).expect("indices already distinct");
        }
        out
    }

    /// Combines identical index strings and drops negligible coefficients.
    pub fn simplify(&self) -> Self {
        let mut index: HashMap<(Vec<usize>, Vec<usize>), usize> = HashMap::new();
        let mut out: Vec<SqTerm> = Vec::new();
        for t in &self.terms {
            let key = (t.creators.clone(), t.annihilators.clone());
            match index.get(&key) {
                Some(&i) => out[i].coeff += t.coeff,
                None => {
                    index.insert(key, out.len());
                    out.push(t.clone());
                }
            }
        }
        out.retain(|t| t.coeff.norm() >= PRUNE_THRESHOLD);
        Self { terms: out }
    }

    /// Jordan–Wigner image, simplified.
    pub fn jw_transform(&self) -> QubitOperator {
        jw_transform(self)
    }
}

impl fmt::Display for SqOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                let mut s = format!("{:+}", t.coeff);
                for p in &t.creators {
                    s.push_str(&format!(" {p}^"));
                }
                for q in &t.annihilators {
                    s.push_str(&format!(" {q}"));
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// `a_p ↦ ½(X_p + iY_p) Z_{p−1}…Z_0`, `a†_p ↦ ½(X_p − iY_p) Z_{p−1}…Z_0`.
fn ladder_image(p: usize, creator: bool) -> [(Complex64, PauliString); 2] {
    let chain = (1u64 << p) - 1;
    let x = PauliString::from_masks(1 << p, chain);
    let y = PauliString::from_masks(1 << p, chain | (1 << p));
    let iy = if creator { Complex64::new(0.0, -0.5) } else { Complex64::new(0.0, 0.5) };
    [(Complex64::new(0.5, 0.0), x), (iy, y)]
}

/// Jordan–Wigner transform of a normal-ordered operator.
pub fn jw_transform(op: &SqOperator) -> QubitOperator {
    let mut out = QubitOperator::new();
    for t in op.terms() {
        let mut acc: Vec<(Complex64, PauliString)> = vec![(t.coeff, PauliString::identity())];
        let ladders = t
            .creators
            .iter()
            .map(|&p| (p, true))
            .chain(t.annihilators.iter().map(|&q| (q, false)));
        for (p, creator) in ladders {
            let image = ladder_image(p, creator);
            let mut next = Vec::with_capacity(acc.len() * 2);
            for &(c, s) in &acc {
                for &(ci, si) in &image {
                    let (phase, prod) = pauli_multiply(&s, &si);
                    next.push((c * ci * phase, prod));
                }
            }
            acc = QubitOperator::from_terms(next).simplify().terms().to_vec();
        }
        for (c, s) in acc {
            out.add_term(c, s);
        }
    }
    out.simplify()
}

/// Number operator `Σ_p a†_p a_p` over `n_modes` spin orbitals.
pub fn number_operator(n_modes: usize) -> SqOperator {
    let mut op = SqOperator::new();
    for p in 0..n_modes {
        op.add_term(1.0, &[p], &[p]).expect("single index");
    }
    op
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::Pauli;

    fn ps(f: &[(usize, Pauli)]) -> PauliString {
        PauliString::new(f).unwrap()
    }

    #[test]
    fn annihilator_image() {
        let mut op = SqOperator::new();
        op.add_term(1.0, &[], &[0]).unwrap();
        let q = op.jw_transform();
        assert_eq!(
            q.terms(),
            &[
                (Complex64::new(0.5, 0.0), ps(&[(0, Pauli::X)])),
                (Complex64::new(0.0, 0.5), ps(&[(0, Pauli::Y)])),
            ]
        );
    }

    #[test]
    fn creator_image_carries_z_chain() {
        let mut op = SqOperator::new();
        op.add_term(1.0, &[1], &[]).unwrap();
        let q = op.jw_transform();
        assert_eq!(
            q.terms(),
            &[
                (Complex64::new(0.5, 0.0), ps(&[(0, Pauli::Z), (1, Pauli::X)])),
                (Complex64::new(0.0, -0.5), ps(&[(0, Pauli::Z), (1, Pauli::Y)])),
            ]
        );
    }

    #[test]
    fn number_operator_image() {
        let q = number_operator(1).jw_transform();
        assert_eq!(
            q.terms(),
            &[
                (Complex64::new(0.5, 0.0), PauliString::identity()),
                (Complex64::new(-0.5, 0.0), ps(&[(0, Pauli::Z)])),
            ]
        );
    }

    #[test]
    fn add_term_sorts_with_sign() {
        let mut op = SqOperator::new();
        op.add_term(1.0, &[2, 4], &[1, 3]).unwrap();
        let t = &op.terms()[0];
        assert_eq!(t.creators, vec![4, 2]);
        assert_eq!(t.annihilators, vec![3, 1]);
        assert_eq!(t.coeff, Complex64::new(1.0, 0.0));
        op.add_term(1.0, &[2, 4], &[3, 1]).unwrap();
        assert_eq!(op.terms()[1].coeff, Complex64::new(-1.0, 0.0));
        assert!(op.simplify().is_empty());
    }

    #[test]
    fn repeated_and_non_normal_ordered_rejected() {
        let mut op = SqOperator::new();
        assert!(op.add_term(1.0, &[1, 1], &[]).is_err());
        assert!(op.add_sequence(1.0, &[(0, false), (1, true)]).is_err());
        assert!(op.add_sequence(1.0, &[(1, true), (0, false)]).is_ok());
    }

    #[test]
    fn adjoint_of_hermitian_pair_is_itself() {
        let mut op = SqOperator::new();
        op.add_term(0.3, &[3], &[1]).unwrap();
        op.add_term(0.3, &[1], &[3]).unwrap();
        assert!(op.jw_transform().is_hermitian(1e-14));
        let mut diff = op.adjoint().jw_transform();
        diff.add_operator(&op.jw_transform().scaled(-1.0));
        assert!(diff.simplify().is_empty());
    }
}
