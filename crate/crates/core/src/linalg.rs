//! Dense linear algebra helpers shared by the LTI, projection and graph code.
//!
//! Everything here is a thin layer over `faer`; the point is to give the rest
//! of the crate checked, error-returning versions of the few primitives it
//! needs (guarded inverses, spectra, norms).

use faer::linalg::solvers::DenseSolveCore;
use faer::prelude::*;
use faer::{c64, Mat, MatRef, Side};

use crate::error::{Error, Result};

/// Condition-number ceiling for every explicit inversion in the crate.
pub const COND_LIMIT: f64 = 1e12;

pub fn from_rows(rows: &[Vec<f64>], ncols: usize) -> Result<Mat<f64>> {
    if let Some(bad) = rows.iter().position(|r| r.len() != ncols) {
        return Err(Error::DimensionMismatch(format!(
            "row {bad} has {} entries, expected {ncols}",
            rows[bad].len()
        )));
    }
    Ok(Mat::from_fn(rows.len(), ncols, |i, j| rows[i][j]))
}

pub fn to_rows(m: MatRef<'_, f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

pub fn to_complex(m: MatRef<'_, f64>) -> Mat<c64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| c64::new(m[(i, j)], 0.0))
}

pub fn all_finite(m: MatRef<'_, f64>) -> bool {
    (0..m.ncols()).all(|j| (0..m.nrows()).all(|i| m[(i, j)].is_finite()))
}

pub fn frobenius(m: MatRef<'_, f64>) -> f64 {
    m.norm_l2()
}

pub fn frobenius_c(m: MatRef<'_, c64>) -> f64 {
    m.norm_l2()
}

/// Largest singular value; zero for empty matrices.
pub fn norm2(m: MatRef<'_, f64>) -> Result<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(0.0);
    }
    let s = m.singular_values().map_err(|_| Error::Svd)?;
    Ok(s.first().copied().unwrap_or(0.0))
}

pub fn norm2_c(m: MatRef<'_, c64>) -> Result<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(0.0);
    }
    let s = m.singular_values().map_err(|_| Error::Svd)?;
    Ok(s.first().copied().unwrap_or(0.0))
}

pub fn singular_values(m: MatRef<'_, f64>) -> Result<Vec<f64>> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(Vec::new());
    }
    m.singular_values().map_err(|_| Error::Svd)
}

/// 2-norm condition number of a square matrix (infinite when singular).
pub fn condition_number(m: MatRef<'_, f64>) -> Result<f64> {
    let s = singular_values(m)?;
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => Ok(hi / lo),
        (Some(_), Some(_)) => Ok(f64::INFINITY),
        _ => Ok(1.0),
    }
}

fn check_conditioning(m: MatRef<'_, f64>, what: &'static str) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "{what} must be square, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let cond = condition_number(m)?;
    if !(cond <= COND_LIMIT) {
        return Err(Error::IllConditioned { what, cond });
    }
    Ok(())
}

/// Inverse with the crate-wide conditioning guard.
pub fn guarded_inverse(m: MatRef<'_, f64>, what: &'static str) -> Result<Mat<f64>> {
    check_conditioning(m, what)?;
    if m.nrows() == 0 {
        return Ok(Mat::zeros(0, 0));
    }
    Ok(m.partial_piv_lu().inverse())
}

/// Solves `m x = rhs` with the conditioning guard on `m`.
pub fn guarded_solve(m: MatRef<'_, f64>, rhs: MatRef<'_, f64>, what: &'static str) -> Result<Mat<f64>> {
    check_conditioning(m, what)?;
    if m.nrows() == 0 {
        return Ok(Mat::zeros(0, rhs.ncols()));
    }
    Ok(m.partial_piv_lu().solve(rhs))
}

/// Unguarded inverse for small positive-definite blocks whose conditioning is
/// already controlled by the caller.
pub fn inverse(m: MatRef<'_, f64>) -> Mat<f64> {
    if m.nrows() == 0 {
        return Mat::zeros(0, 0);
    }
    m.partial_piv_lu().inverse()
}

pub fn spectrum(m: MatRef<'_, f64>, what: &'static str) -> Result<Vec<c64>> {
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    m.eigenvalues().map_err(|_| Error::Eigen(what))
}

/// Ascending eigenvalues of a symmetric matrix (lower triangle is read).
pub fn symmetric_spectrum(m: MatRef<'_, f64>, what: &'static str) -> Result<Vec<f64>> {
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    m.self_adjoint_eigenvalues(Side::Lower)
        .map_err(|_| Error::Eigen(what))
}

/// ‖M − Mᵀ‖_F / ‖M‖_F (zero for the zero matrix).
pub fn asymmetry(m: MatRef<'_, f64>) -> f64 {
    let scale = frobenius(m);
    if scale == 0.0 {
        return 0.0;
    }
    let d = m - m.transpose();
    frobenius(d.as_ref()) / scale
}

/// ‖PᵀP − I‖_F.
pub fn orthonormality_residual(p: MatRef<'_, f64>) -> f64 {
    let g = p.transpose() * p;
    let eye = Mat::<f64>::identity(p.ncols(), p.ncols());
    frobenius((&g - &eye).as_ref())
}

/// Columns of a thin orthonormal basis for the column space of `m`
/// (Householder QR, signs chosen so the R diagonal is nonnegative).
pub fn orthonormalize(m: MatRef<'_, f64>) -> Result<Mat<f64>> {
    let (n, r) = (m.nrows(), m.ncols());
    if r > n {
        return Err(Error::DimensionMismatch(format!("cannot orthonormalize {r} columns in R^{n}")));
    }
    if r == 0 {
        return Ok(Mat::zeros(n, 0));
    }
    let qr = m.qr();
    let q = qr.compute_thin_Q();
    let rr = qr.thin_R();
    let scale = (0..r).map(|i| rr[(i, i)].abs()).fold(0.0_f64, f64::max);
    for i in 0..r {
        if !(rr[(i, i)].abs() > 1e-10 * scale.max(f64::MIN_POSITIVE)) {
            return Err(Error::InvalidProjection(format!(
                "columns are rank deficient (R[{i},{i}] = {:e})",
                rr[(i, i)]
            )));
        }
    }
    Ok(Mat::from_fn(n, r, |i, j| {
        if rr[(j, j)] < 0.0 {
            -q[(i, j)]
        } else {
            q[(i, j)]
        }
    }))
}

/// Maximum entrywise absolute difference.
pub fn max_abs_diff(a: MatRef<'_, f64>, b: MatRef<'_, f64>) -> f64 {
    let mut worst = 0.0_f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            worst = worst.max((a[(i, j)] - b[(i, j)]).abs());
        }
    }
    worst
}

/// `[a b]`, tolerating empty blocks.
pub fn hstack(a: MatRef<'_, f64>, b: MatRef<'_, f64>) -> Mat<f64> {
    debug_assert_eq!(a.nrows(), b.nrows());
    let ca = a.ncols();
    Mat::from_fn(a.nrows(), ca + b.ncols(), |i, j| {
        if j < ca {
            a[(i, j)]
        } else {
            b[(i, j - ca)]
        }
    })
}

/// `[a; b]`, tolerating empty blocks.
pub fn vstack(a: MatRef<'_, f64>, b: MatRef<'_, f64>) -> Mat<f64> {
    debug_assert_eq!(a.ncols(), b.ncols());
    let ra = a.nrows();
    Mat::from_fn(ra + b.nrows(), a.ncols(), |i, j| {
        if i < ra {
            a[(i, j)]
        } else {
            b[(i - ra, j)]
        }
    })
}

/// `[[a, b], [c, d]]`.
pub fn block2(a: MatRef<'_, f64>, b: MatRef<'_, f64>, c: MatRef<'_, f64>, d: MatRef<'_, f64>) -> Mat<f64> {
    let top = hstack(a, b);
    let bottom = hstack(c, d);
    vstack(top.as_ref(), bottom.as_ref())
}
