use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Overlap eigenvalues below this are discarded by canonical orthogonalization.
pub const DEFAULT_TRIM_THRESHOLD: f64 = 1e-9;

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending and
/// eigenvectors as matching columns.
pub fn hermitian_eigen(m: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    // Symmetrize away rounding noise before handing to the solver.
    let sym = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_columns(
        &order.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect::<Vec<_>>(),
    );
    (values, vectors)
}

/// `H c = S c E` in a possibly non-orthogonal, possibly linearly dependent basis.
#[derive(Debug, Clone)]
pub struct GeneralizedEigProblem {
    pub h: DMatrix<Complex64>,
    pub s: DMatrix<Complex64>,
    pub trim_threshold: f64,
}

impl GeneralizedEigProblem {
    pub fn new(h: DMatrix<Complex64>, s: DMatrix<Complex64>) -> Self {
        Self { h, s, trim_threshold: DEFAULT_TRIM_THRESHOLD }
    }

    pub fn with_trim(mut self, threshold: f64) -> Self {
        self.trim_threshold = threshold;
        self
    }
}

#[derive(Debug, Clone)]
pub struct GeneralizedEigSolution {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Coefficients in the original (non-orthogonal) basis, one column per
    /// eigenvalue, normalized so that `c† S c = 1`.
    pub eigenvectors: DMatrix<Complex64>,
    /// Number of overlap directions kept.
    pub retained_dim: usize,
}

/// Canonical orthogonalization: diagonalize S, drop directions with
/// eigenvalue below the trim threshold, solve the ordinary problem in the
/// remaining orthonormal basis.
pub fn solve_generalized_eig(p: &GeneralizedEigProblem) -> Result<GeneralizedEigSolution> {
    let n = p.s.nrows();
    if p.s.ncols() != n || p.h.nrows() != n || p.h.ncols() != n {
        return Err(Error::InvalidArgument(format!(
            "H is {}x{} but S is {}x{}",
            p.h.nrows(),
            p.h.ncols(),
            p.s.nrows(),
            p.s.ncols()
        )));
    }
    let (sigma, u) = hermitian_eigen(&p.s);
    let kept: Vec<usize> = (0..n).filter(|&i| sigma[i] >= p.trim_threshold).collect();
    if kept.is_empty() {
        return Err(Error::Numerical(format!(
            "no overlap eigenvalue above trim threshold {:e}",
            p.trim_threshold
        )));
    }
    let x = DMatrix::from_columns(
        &kept
            .iter()
            .map(|&i| u.column(i) * Complex64::new(sigma[i].sqrt().recip(), 0.0))
            .collect::<Vec<_>>(),
    );
    let h_orth = x.adjoint() * &p.h * &x;
    let (values, vecs) = hermitian_eigen(&h_orth);
    Ok(GeneralizedEigSolution {
        eigenvalues: values,
        eigenvectors: x * vecs,
        retained_dim: kept.len(),
    })
}
