//! Closed-form proximal operators of the tensor nuclear norm and the l1 norm.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::is_real_slice;
use crate::error::{Error, Result};
use crate::linalg;
use crate::spectral::{dft3, half_spectrum_len, idft3, map_slices, mirror_half, SpectralTensor3};
use crate::tensor::Tensor3;

fn check_threshold(tau: f64) -> Result<()> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::Argument(format!("threshold {tau} must be positive and finite")));
    }
    Ok(())
}

/// Tensor singular value thresholding: the minimizer of
/// `tau * ||L||_* + 0.5 * ||L - Y||_F^2`.
///
/// Each spectral slice has its singular values shrunk by exactly `tau`. The
/// `1/n3` in the nuclear norm and the `1/n3` relating spectral and original
/// Frobenius norms cancel.
pub fn tsvt(y: &Tensor3, tau: f64) -> Result<Tensor3> {
    check_threshold(tau)?;
    let dims = y.dims();
    let n3 = dims.n3;
    let spec = dft3(y);
    let half = map_slices(half_spectrum_len(n3), |k| -> Result<DMatrix<Complex64>> {
        let slice = spec.slice(k).expect("in range");
        let svd = linalg::svd_slice(&slice, k, is_real_slice(k, n3))?;
        let kept = svd.s.iter().take_while(|&&s| s > tau).count();
        if kept == 0 {
            return Ok(DMatrix::zeros(dims.n1, dims.n2));
        }
        let shrunk: Vec<f64> = svd.s[..kept].iter().map(|s| s - tau).collect();
        Ok(linalg::recompose(&svd.u, &shrunk, &svd.v_adj, kept))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let slices = mirror_half(half, n3, |m| m.map(|z| z.conj()));
    idft3(&SpectralTensor3::from_slices(&slices)?)
}

/// Scalar soft-thresholding `sign(y) * max(|y| - tau, 0)`.
#[inline]
pub fn shrink(y: f64, tau: f64) -> f64 {
    if y > tau {
        y - tau
    } else if y < -tau {
        y + tau
    } else {
        0.0
    }
}

/// Entrywise soft-thresholding: the minimizer of
/// `tau * ||E||_1 + 0.5 * ||E - Y||_F^2`.
pub fn soft_threshold(y: &Tensor3, tau: f64) -> Result<Tensor3> {
    check_threshold(tau)?;
    Ok(y.map(|v| shrink(v, tau)))
}
