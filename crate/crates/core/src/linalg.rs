//! Per-slice dense SVD, backed by faer.
//!
//! nalgebra's bidiagonal SVD was dropped here: on exactly rank-deficient
//! inputs it intermittently returned factors that do not reconstruct the
//! matrix. Slices still travel as nalgebra matrices; only the factorization
//! goes through faer.

use faer::{Mat, MatRef};
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Thin SVD `m = u * diag(s) * v_adj` with `s` sorted descending.
#[derive(Clone, Debug)]
pub struct SliceSvd {
    pub u: DMatrix<Complex64>,
    pub s: Vec<f64>,
    pub v_adj: DMatrix<Complex64>,
}

impl SliceSvd {
    pub fn conj(&self) -> SliceSvd {
        SliceSvd {
            u: self.u.map(|z| z.conj()),
            s: self.s.clone(),
            v_adj: self.v_adj.map(|z| z.conj()),
        }
    }
}

fn to_faer<T: Copy>(m: &DMatrix<T>) -> Mat<T> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer<T: Copy + nalgebra::Scalar>(m: MatRef<'_, T>) -> DMatrix<T> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// SVD of a real matrix as `(U, s, V^T)`. `slice` only labels the error.
pub fn svd_real(m: &DMatrix<f64>, slice: usize) -> Result<(DMatrix<f64>, Vec<f64>, DMatrix<f64>)> {
    let svd = to_faer(m).thin_svd().map_err(|_| Error::SvdNonConvergence { slice })?;
    let s = svd.S().column_vector().iter().copied().collect();
    Ok((from_faer(svd.U()), s, from_faer(svd.V().transpose())))
}

/// Singular values only, descending.
pub fn singular_values_real(m: &DMatrix<f64>, slice: usize) -> Result<Vec<f64>> {
    to_faer(m).singular_values().map_err(|_| Error::SvdNonConvergence { slice })
}

/// SVD of a spectral slice. When `real` is set the imaginary parts are
/// treated as roundoff and a real SVD is used; this is exact for the DC
/// slice (and the Nyquist slice for even `n3`) of a real tensor.
pub fn svd_slice(m: &DMatrix<Complex64>, slice: usize, real: bool) -> Result<SliceSvd> {
    if real {
        let (u, s, v_t) = svd_real(&m.map(|z| z.re), slice)?;
        return Ok(SliceSvd {
            u: u.map(|v| Complex64::new(v, 0.0)),
            s,
            v_adj: v_t.map(|v| Complex64::new(v, 0.0)),
        });
    }
    let svd = to_faer(m).thin_svd().map_err(|_| Error::SvdNonConvergence { slice })?;
    let v = svd.V();
    Ok(SliceSvd {
        u: from_faer(svd.U()),
        s: svd.S().column_vector().iter().map(|z| z.re).collect(),
        v_adj: DMatrix::from_fn(v.ncols(), v.nrows(), |i, j| v[(j, i)].conj()),
    })
}

pub fn singular_values_slice(m: &DMatrix<Complex64>, slice: usize, real: bool) -> Result<Vec<f64>> {
    if real {
        return singular_values_real(&m.map(|z| z.re), slice);
    }
    to_faer(m).singular_values().map_err(|_| Error::SvdNonConvergence { slice })
}

/// `u[:, ..r] * diag(s[..r]) * v_adj[..r, :]`.
pub fn recompose(u: &DMatrix<Complex64>, s: &[f64], v_adj: &DMatrix<Complex64>, r: usize) -> DMatrix<Complex64> {
    let mut scaled = u.columns(0, r).into_owned();
    for (c, &sv) in s.iter().take(r).enumerate() {
        scaled.column_mut(c).scale_mut(sv);
    }
    scaled * v_adj.rows(0, r)
}
