//! Small dense complex linear-algebra helpers on top of nalgebra.

use nalgebra::{Cholesky, DVector, SVD};
use num_complex::Complex64;

use crate::error::{HrisError, Result};
use crate::CMat;

/// Singular values below `RANK_TOL * sigma_max` count as zero.
pub const RANK_TOL: f64 = 1e-10;

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn trace(a: &CMat) -> Complex64 {
    a.diagonal().iter().sum()
}

/// Largest absolute entry of `a - b`.
pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn hermitian_defect(a: &CMat) -> f64 {
    max_abs_diff(a, &a.adjoint())
}

/// Average `a` with its adjoint to remove round-off asymmetry.
pub fn hermitize(a: &CMat) -> CMat {
    (a + a.adjoint()) * c(0.5)
}

/// Inverse of a Hermitian positive-definite matrix through a Cholesky solve.
pub fn hpd_inverse(a: &CMat) -> Result<CMat> {
    let n = a.nrows();
    let chol = Cholesky::new(hermitize(a))
        .ok_or_else(|| HrisError::Numerical("matrix is not Hermitian positive definite".into()))?;
    Ok(hermitize(&chol.solve(&identity(n))))
}

/// Solve `a x = b` for Hermitian positive-definite `a`.
pub fn hpd_solve(a: &CMat, b: &CMat) -> Result<CMat> {
    let chol = Cholesky::new(hermitize(a))
        .ok_or_else(|| HrisError::Numerical("matrix is not Hermitian positive definite".into()))?;
    Ok(chol.solve(b))
}

/// Numerical rank with the crate-wide relative tolerance.
pub fn numerical_rank(singular_values: &DVector<f64>) -> usize {
    let smax = singular_values.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    singular_values.iter().filter(|&&s| s > RANK_TOL * smax).count()
}

/// Moore-Penrose pseudo-inverse together with the numerical rank.
pub fn pinv_with_rank(a: &CMat) -> Result<(CMat, usize)> {
    let svd = SVD::new(a.clone(), true, true);
    let rank = numerical_rank(&svd.singular_values);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let eps = if smax > 0.0 { RANK_TOL * smax } else { f64::MIN_POSITIVE };
    let pinv = svd
        .pseudo_inverse(eps)
        .map_err(|e| HrisError::Numerical(format!("pseudo-inverse failed: {e}")))?;
    Ok((pinv, rank))
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Column-major vectorization.
pub fn vec(a: &CMat) -> DVector<Complex64> {
    DVector::from_column_slice(a.as_slice())
}

/// Inverse of [`vec`].
pub fn unvec(v: &DVector<Complex64>, rows: usize, cols: usize) -> CMat {
    CMat::from_column_slice(rows, cols, v.as_slice())
}

/// Horizontal concatenation of equally tall blocks.
pub fn hstack(blocks: &[CMat]) -> CMat {
    let rows = blocks.first().map_or(0, |b| b.nrows());
    let cols = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = CMat::zeros(rows, cols);
    let mut offset = 0;
    for b in blocks {
        out.view_mut((0, offset), (rows, b.ncols())).copy_from(b);
        offset += b.ncols();
    }
    out
}

/// Vertical concatenation of equally wide blocks.
pub fn vstack(blocks: &[CMat]) -> CMat {
    let cols = blocks.first().map_or(0, |b| b.ncols());
    let rows = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = CMat::zeros(rows, cols);
    let mut offset = 0;
    for b in blocks {
        out.view_mut((offset, 0), (b.nrows(), cols)).copy_from(b);
        offset += b.nrows();
    }
    out
}

pub fn frobenius_sq(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}
