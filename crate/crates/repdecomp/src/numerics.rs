//! Dense complex matrix utilities shared by every other module: Hermitian
//! eigendecomposition with a deterministic phase convention, eigenvalue
//! clustering, norms, and the tolerance policy.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::ops::Range;
use thiserror::Error;

/// Dense column-major complex matrix; the value type for every representation
/// matrix, density matrix, and change of basis in this crate.
pub type CMatrix = DMatrix<Complex64>;

/// Numerical tolerances threaded through the pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TolerancePolicy {
    /// Absolute comparison tolerance for matrix equality checks.
    pub eq_tol: f64,
    /// Gap below which two adjacent eigenvalues belong to the same cluster.
    pub eig_group_tol: f64,
    /// Relative threshold under which a block is treated as zero.
    pub zero_block_tol: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        Self {
            eq_tol: 1e-8,
            eig_group_tol: 1e-7,
            zero_block_tol: 1e-9,
        }
    }
}

impl TolerancePolicy {
    /// Checks that all tolerances are strictly positive and that clustering is
    /// no finer than equality.
    pub fn validate(&self) -> Result<(), NumericsError> {
        if !(self.eq_tol > 0.0 && self.eig_group_tol > 0.0 && self.zero_block_tol > 0.0) {
            return Err(NumericsError::InvalidTolerance(
                "tolerances must be strictly positive".into(),
            ));
        }
        if self.eig_group_tol < self.eq_tol {
            return Err(NumericsError::InvalidTolerance(
                "eig_group_tol must be >= eq_tol".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum NumericsError {
    #[error("matrix is not Hermitian: max |A - A^†| = {deviation:.3e} exceeds {tol:.3e}")]
    NotHermitian { deviation: f64, tol: f64 },
    #[error("eigensolver failed to converge")]
    ConvergenceFailure,
    #[error("matrix is not square: {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },
    #[error("invalid tolerance policy: {0}")]
    InvalidTolerance(String),
}

/// Largest entry magnitude (max norm).
pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Frobenius norm.
pub fn fro_norm(a: &CMatrix) -> f64 {
    a.norm()
}

/// `‖U†U − I‖_F`, the departure of a square matrix from unitarity.
pub fn unitarity_residual(u: &CMatrix) -> Result<f64, NumericsError> {
    if u.nrows() != u.ncols() {
        return Err(NumericsError::NonSquare {
            rows: u.nrows(),
            cols: u.ncols(),
        });
    }
    let n = u.nrows();
    Ok((u.adjoint() * u - CMatrix::identity(n, n)).norm())
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Returns eigenvalues sorted ascending and the matching unitary eigenvector
/// matrix. The decomposition is deterministic: ties are broken by the
/// pre-sort order, and each eigenvector is rotated so that its first component
/// of magnitude above `pol.eq_tol` is real and positive.
pub fn hermitian_eig(
    a: &CMatrix,
    pol: &TolerancePolicy,
) -> Result<(DVector<f64>, CMatrix), NumericsError> {
    if a.nrows() != a.ncols() {
        return Err(NumericsError::NonSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    let n = a.nrows();
    if n == 0 {
        return Ok((DVector::zeros(0), CMatrix::zeros(0, 0)));
    }
    let scale = max_abs(a).max(1.0);
    let herm_dev = max_abs(&(a - a.adjoint()));
    if herm_dev > pol.eq_tol * scale {
        return Err(NumericsError::NotHermitian {
            deviation: herm_dev,
            tol: pol.eq_tol * scale,
        });
    }
    // Work on the exactly-Hermitian average so solver input noise cannot leak
    // into complex eigenvalues.
    let sym = (a + a.adjoint()).map(|z| z * 0.5);
    let eig = sym
        .clone()
        .try_symmetric_eigen(f64::EPSILON, 0)
        .ok_or(NumericsError::ConvergenceFailure)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[i]
            .partial_cmp(&eig.eigenvalues[j])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(i.cmp(&j))
    });
    let values = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = eig.eigenvectors.select_columns(order.iter());

    for mut col in vectors.column_iter_mut() {
        if let Some(lead) = col.iter().find(|z| z.norm() > pol.eq_tol) {
            let phase = lead.conj() / lead.norm();
            for z in col.iter_mut() {
                *z *= phase;
            }
        }
    }

    let residual = (&sym * &vectors
        - &vectors * CMatrix::from_diagonal(&values.map(|v| Complex64::new(v, 0.0))))
        .norm();
    if residual > 1e-10 * sym.norm().max(1.0) {
        return Err(NumericsError::ConvergenceFailure);
    }
    Ok((values, vectors))
}

/// Partitions the indices of an ascending eigenvalue vector into maximal runs
/// of near-equal values: adjacent values closer than `tol` share a cluster.
pub fn cluster_eigenvalues(lambda: &[f64], tol: f64) -> Vec<Range<usize>> {
    let mut groups = Vec::new();
    let mut start = 0;
    for i in 1..lambda.len() {
        debug_assert!(lambda[i] >= lambda[i - 1], "eigenvalues must be ascending");
        if lambda[i] - lambda[i - 1] >= tol {
            groups.push(start..i);
            start = i;
        }
    }
    if !lambda.is_empty() {
        groups.push(start..lambda.len());
    }
    groups
}

/// Spectral radius of a Hermitian matrix (largest eigenvalue magnitude).
pub fn spectral_radius_hermitian(
    a: &CMatrix,
    pol: &TolerancePolicy,
) -> Result<f64, NumericsError> {
    let (values, _) = hermitian_eig(a, pol)?;
    Ok(values.iter().fold(0.0f64, |m, v| m.max(v.abs())))
}

/// Spectral norm (largest singular value) of an arbitrary complex matrix.
pub fn spectral_norm(a: &CMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .fold(0.0f64, |m, s| m.max(*s))
}

/// Principal angles (radians, ascending) between the column spans of two
/// matrices with orthonormal columns of equal dimension.
pub fn principal_angles(q1: &CMatrix, q2: &CMatrix) -> Vec<f64> {
    let overlap = q1.adjoint() * q2;
    let mut cosines: Vec<f64> = overlap
        .svd(false, false)
        .singular_values
        .iter()
        .map(|s| s.clamp(-1.0, 1.0).acos())
        .collect();
    cosines.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cosines
}

/// Embeds a real matrix into the complex matrix type.
pub fn complex_from_real(a: &DMatrix<f64>) -> CMatrix {
    a.map(|x| Complex64::new(x, 0.0))
}

/// Real part of a complex matrix.
pub fn real_part(a: &CMatrix) -> DMatrix<f64> {
    a.map(|z| z.re)
}

/// Frobenius norm of the imaginary part.
pub fn imag_norm(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.im * z.im).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cm(rows: usize, cols: usize, data: &[Complex64]) -> CMatrix {
        CMatrix::from_row_slice(rows, cols, data)
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_eigendecomposition() {
        let pol = TolerancePolicy::default();
        let (vals, vecs) = hermitian_eig(&CMatrix::identity(2, 2), &pol).unwrap();
        assert_eq!(vals.as_slice(), &[1.0, 1.0]);
        assert!(unitarity_residual(&vecs).unwrap() <= 1e-12);
    }

    #[test]
    fn diagonal_matrix_sorts_ascending() {
        let pol = TolerancePolicy::default();
        let a = cm(2, 2, &[c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
        let (vals, vecs) = hermitian_eig(&a, &pol).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-12 && (vals[1] - 2.0).abs() < 1e-12);
        // Columns of a permuted identity, with the phase convention making the
        // leading entries +1.
        assert!((vecs[(1, 0)] - c(1.0, 0.0)).norm() < 1e-12);
        assert!((vecs[(0, 1)] - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn pauli_x_eigenvectors() {
        let pol = TolerancePolicy::default();
        let sx = cm(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let (vals, vecs) = hermitian_eig(&sx, &pol).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-12 && (vals[1] - 1.0).abs() < 1e-12);
        let s = 1.0 / 2.0_f64.sqrt();
        // Phase convention: first component real positive.
        assert!((vecs[(0, 0)] - c(s, 0.0)).norm() < 1e-12);
        assert!((vecs[(1, 0)] - c(-s, 0.0)).norm() < 1e-12);
        assert!((vecs[(0, 1)] - c(s, 0.0)).norm() < 1e-12);
        assert!((vecs[(1, 1)] - c(s, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn rejects_non_hermitian() {
        let pol = TolerancePolicy::default();
        let a = cm(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(
            hermitian_eig(&a, &pol),
            Err(NumericsError::NotHermitian { .. })
        ));
    }

    #[test]
    fn unitarity_residual_values() {
        assert!(unitarity_residual(&CMatrix::identity(3, 3)).unwrap() <= 1e-15);
        let two_i = CMatrix::identity(2, 2).map(|z| z * 2.0);
        let expected = 3.0 * 2.0_f64.sqrt();
        assert!((unitarity_residual(&two_i).unwrap() - expected).abs() < 1e-12);
        let rect = CMatrix::zeros(2, 3);
        assert!(matches!(
            unitarity_residual(&rect),
            Err(NumericsError::NonSquare { .. })
        ));
    }

    #[test]
    fn clustering_examples() {
        assert_eq!(cluster_eigenvalues(&[1.0, 1.0, 2.0], 1e-7), vec![0..2, 2..3]);
        assert_eq!(
            cluster_eigenvalues(&[0.5, 0.5 + 1e-9, 0.7], 1e-7),
            vec![0..2, 2..3]
        );
        assert_eq!(cluster_eigenvalues(&[], 1e-7), Vec::<Range<usize>>::new());
    }

    #[test]
    fn tolerance_validation() {
        assert!(TolerancePolicy::default().validate().is_ok());
        let bad = TolerancePolicy {
            eq_tol: 1e-6,
            eig_group_tol: 1e-8,
            zero_block_tol: 1e-9,
        };
        assert!(bad.validate().is_err());
        let nonpos = TolerancePolicy {
            eq_tol: 0.0,
            ..TolerancePolicy::default()
        };
        assert!(nonpos.validate().is_err());
    }

    #[test]
    fn principal_angles_of_identical_and_orthogonal_spans() {
        let e0 = CMatrix::from_row_slice(3, 1, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let e1 = CMatrix::from_row_slice(3, 1, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        assert!(principal_angles(&e0, &e0)[0].abs() < 1e-12);
        assert!((principal_angles(&e0, &e1)[0] - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }
}
