use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::solvers::hermitian_eigen;

pub const DEFAULT_RIDGE: f64 = 1e-8;

/// Solves `(S + ridge·I) α = b` for Hermitian `S` through its eigen-decomposition.
pub fn solve_linear_regularized(
    s: &DMatrix<Complex64>,
    b: &DVector<Complex64>,
    ridge: f64,
) -> Result<DVector<Complex64>> {
    let n = s.nrows();
    if s.ncols() != n || b.len() != n {
        return Err(Error::InvalidArgument(format!(
            "system is {}x{} with right-hand side of length {}",
            n,
            s.ncols(),
            b.len()
        )));
    }
    if n == 0 {
        return Ok(DVector::zeros(0));
    }
    let (sigma, u) = hermitian_eigen(s);
    let scale = sigma.iter().fold(ridge.abs(), |m, x| m.max(x.abs()));
    let floor = scale * 1e-15;
    if sigma.iter().any(|&x| (x + ridge).abs() <= floor) || scale == 0.0 {
        return Err(Error::Numerical("matrix singular after regularization".into()));
    }
    let proj = u.adjoint() * b;
    let scaled = DVector::from_iterator(
        n,
        proj.iter().zip(&sigma).map(|(p, &x)| p / Complex64::new(x + ridge, 0.0)),
    );
    Ok(u * scaled)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn identity_system() {
        let b = DVector::from_vec(vec![c(2.0), c(-1.0)]);
        let x = solve_linear_regularized(&DMatrix::identity(2, 2), &b, 0.5).unwrap();
        assert!((x[0] - c(2.0 / 1.5)).norm() < 1e-15);
        assert!((x[1] - c(-1.0 / 1.5)).norm() < 1e-15);
    }

    #[test]
    fn positive_definite_residual() {
        let a = DMatrix::from_row_slice(3, 3, &[c(1.0), c(0.2), c(0.0), c(-0.1), c(1.5), c(0.3), c(0.4), c(0.0), c(0.9)]);
        let s = a.adjoint() * &a;
        let b = DVector::from_vec(vec![c(1.0), c(2.0), c(-0.5)]);
        let x = solve_linear_regularized(&s, &b, 0.0).unwrap();
        assert!((&s * x - &b).norm() <= 1e-8 * b.norm());
    }

    #[test]
    fn rank_deficient_consistent_system() {
        // S projects onto span{e0 + e1}; b lies in its range.
        let s = DMatrix::from_row_slice(2, 2, &[c(0.5), c(0.5), c(0.5), c(0.5)]);
        let b = DVector::from_vec(vec![c(1.0), c(1.0)]);
        let x = solve_linear_regularized(&s, &b, DEFAULT_RIDGE).unwrap();
        assert!(x.iter().all(|v| v.norm().is_finite()));
        assert!((&s * &x - &b).norm() < 1e-7);
        assert!((x[0] - x[1]).norm() < 1e-12);
    }

    #[test]
    fn singular_without_ridge_errors() {
        let z = DMatrix::<Complex64>::zeros(2, 2);
        let b = DVector::from_vec(vec![c(1.0), c(0.0)]);
        assert!(solve_linear_regularized(&z, &b, 0.0).is_err());
    }
}
