//! The t-product algebra: block-circulant operators, t-product, transpose,
//! identity, orthogonality, t-SVD, ranks and the tensor nuclear and spectral
//! norms.
//!
//! Everything spectral works on the Fourier-domain slices `Abar^(k)`. For a
//! real tensor only slices `0..=n3/2` are decomposed; the remaining ones are
//! complex conjugates of their mirrors and reuse those results.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, SliceSvd};
use crate::spectral::{dft3, half_spectrum_len, idft3, map_slices, mirror_half, SpectralTensor3};
use crate::tensor::{Tensor3, TensorDims};

/// Default relative tolerance for rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

/// Whether spectral slice `k` of a real tensor is itself real.
pub(crate) fn is_real_slice(k: usize, n3: usize) -> bool {
    k == 0 || (n3.is_multiple_of(2) && k == n3 / 2)
}

/// Block-circulant matrix: block `(r, c)` is frontal slice `(r - c) mod n3`.
pub fn bcirc(a: &Tensor3) -> DMatrix<f64> {
    let TensorDims { n1, n2, n3 } = a.dims();
    let mut m = DMatrix::zeros(n1 * n3, n2 * n3);
    for r in 0..n3 {
        for c in 0..n3 {
            let k = (r + n3 - c) % n3;
            let slice = a.frontal_slice(k).expect("slice index in range");
            m.view_mut((r * n1, c * n2), (n1, n2)).copy_from(&slice);
        }
    }
    m
}

/// Frontal slices stacked vertically: `n1*n3 x n2`.
pub fn unfold(a: &Tensor3) -> DMatrix<f64> {
    let TensorDims { n1, n2, n3 } = a.dims();
    let mut m = DMatrix::zeros(n1 * n3, n2);
    for k in 0..n3 {
        m.view_mut((k * n1, 0), (n1, n2))
            .copy_from(&a.frontal_slice(k).expect("slice index in range"));
    }
    m
}

/// Inverse of [`unfold`] for a tensor with `n3` frontal slices.
pub fn fold(m: &DMatrix<f64>, n3: usize) -> Result<Tensor3> {
    if n3 == 0 || !m.nrows().is_multiple_of(n3) {
        return Err(Error::Shape(format!(
            "{} rows cannot be split into {n3} frontal slices",
            m.nrows()
        )));
    }
    let n1 = m.nrows() / n3;
    let slices: Vec<DMatrix<f64>> = (0..n3)
        .map(|k| m.view((k * n1, 0), (n1, m.ncols())).into_owned())
        .collect();
    Tensor3::from_frontal_slices(&slices)
}

fn check_product_dims(a: &Tensor3, b: &Tensor3) -> Result<()> {
    let (da, db) = (a.dims(), b.dims());
    if da.n2 != db.n1 || da.n3 != db.n3 {
        return Err(Error::Shape(format!("cannot t-multiply {da} by {db}")));
    }
    Ok(())
}

/// t-product of `n1 x n2 x n3` and `n2 x l x n3` tensors, computed as
/// slicewise products in the Fourier domain.
pub fn tprod(a: &Tensor3, b: &Tensor3) -> Result<Tensor3> {
    check_product_dims(a, b)?;
    let n3 = a.dims().n3;
    let (fa, fb) = (dft3(a), dft3(b));
    let half = map_slices(half_spectrum_len(n3), |k| {
        let prod = fa.slice(k).expect("in range") * fb.slice(k).expect("in range");
        if is_real_slice(k, n3) {
            prod.map(|z| Complex64::new(z.re, 0.0))
        } else {
            prod
        }
    });
    let slices = mirror_half(half, n3, |m| m.map(|z| z.conj()));
    idft3(&SpectralTensor3::from_slices(&slices)?)
}

/// Reference t-product, `fold(bcirc(A) * unfold(B))`, by dense matrix
/// multiplication. Quadratic in `n3`; meant for cross-checking [`tprod`].
pub fn tprod_oracle(a: &Tensor3, b: &Tensor3) -> Result<Tensor3> {
    check_product_dims(a, b)?;
    fold(&(bcirc(a) * unfold(b)), a.dims().n3)
}

/// Transpose every frontal slice, then reverse the order of slices `1..n3`.
pub fn ttranspose(a: &Tensor3) -> Tensor3 {
    let d = a.dims();
    let td = d.transposed();
    let mut data = vec![0.0; d.len()];
    for k in 0..d.n3 {
        let src = (d.n3 - k) % d.n3;
        for j in 0..d.n2 {
            for i in 0..d.n1 {
                data[td.offset(j, i, k)] = a.as_slice()[d.offset(i, j, src)];
            }
        }
    }
    Tensor3::from_raw(td, data)
}

/// `n x n x n3` tensor whose first frontal slice is the identity and the
/// rest are zero.
pub fn identity_tensor(n: usize, n3: usize) -> Result<Tensor3> {
    let dims = TensorDims::new(n, n, n3)?;
    let mut t = Tensor3::zeros(dims);
    for i in 0..n {
        t.set(i, i, 0, 1.0);
    }
    Ok(t)
}

/// Whether `Q^T * Q` and `Q * Q^T` are both within `tol` (Frobenius) of the
/// identity tensor.
pub fn is_orthogonal(q: &Tensor3, tol: f64) -> Result<bool> {
    let d = q.dims();
    if d.n1 != d.n2 {
        return Err(Error::Shape(format!("orthogonality needs square frontal slices, got {d}")));
    }
    let id = identity_tensor(d.n1, d.n3)?;
    let qt = ttranspose(q);
    let left = tprod(&qt, q)?.add_scaled(-1.0, &id)?.norm_fro();
    let right = tprod(q, &qt)?.add_scaled(-1.0, &id)?.norm_fro();
    Ok(left <= tol && right <= tol)
}

/// Per-slice SVDs of `Abar^(k)` for all `k`, decomposing only the first half.
pub fn spectral_svds(a: &Tensor3) -> Result<Vec<SliceSvd>> {
    spectral_svds_of(&dft3(a))
}

pub(crate) fn spectral_svds_of(spec: &SpectralTensor3) -> Result<Vec<SliceSvd>> {
    let n3 = spec.dims().n3;
    let half = map_slices(half_spectrum_len(n3), |k| {
        linalg::svd_slice(&spec.slice(k).expect("in range"), k, is_real_slice(k, n3))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(mirror_half(half, n3, SliceSvd::conj))
}

/// Singular values of every spectral slice, descending within each slice.
pub fn spectral_singular_values(a: &Tensor3) -> Result<Vec<Vec<f64>>> {
    let spec = dft3(a);
    let n3 = a.dims().n3;
    let half = map_slices(half_spectrum_len(n3), |k| {
        linalg::singular_values_slice(&spec.slice(k).expect("in range"), k, is_real_slice(k, n3))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(mirror_half(half, n3, Vec::clone))
}

/// Factors of `A = U * S * V^T`.
///
/// `u` is `n1 x rank x n3`, `s` is `rank x rank x n3` and f-diagonal, `v` is
/// `n2 x rank x n3`. For the full factorization `rank = min(n1, n2)`.
#[derive(Clone, Debug)]
pub struct TSvd {
    pub u: Tensor3,
    pub s: Tensor3,
    pub v: Tensor3,
    pub skinny: bool,
    pub rank: usize,
}

impl TSvd {
    /// `U * S * V^T`.
    pub fn reconstruct(&self) -> Result<Tensor3> {
        tprod(&tprod(&self.u, &self.s)?, &ttranspose(&self.v))
    }
}

fn assemble_tsvd(svds: &[SliceSvd], dims: TensorDims, rank: usize, skinny: bool) -> Result<TSvd> {
    let zero = Complex64::new(0.0, 0.0);
    let mut u_slices = Vec::with_capacity(dims.n3);
    let mut s_slices = Vec::with_capacity(dims.n3);
    let mut v_slices = Vec::with_capacity(dims.n3);
    for svd in svds {
        u_slices.push(svd.u.columns(0, rank).into_owned());
        s_slices.push(DMatrix::from_fn(rank, rank, |i, j| {
            if i == j {
                Complex64::new(svd.s[i], 0.0)
            } else {
                zero
            }
        }));
        v_slices.push(svd.v_adj.rows(0, rank).adjoint());
    }
    Ok(TSvd {
        u: idft3(&SpectralTensor3::from_slices(&u_slices)?)?,
        s: idft3(&SpectralTensor3::from_slices(&s_slices)?)?,
        v: idft3(&SpectralTensor3::from_slices(&v_slices)?)?,
        skinny,
        rank,
    })
}

/// Full t-SVD with `min(n1, n2)` singular tubes.
pub fn tsvd(a: &Tensor3) -> Result<TSvd> {
    let dims = a.dims();
    assemble_tsvd(&spectral_svds(a)?, dims, dims.n_min(), false)
}

/// t-SVD truncated to `r` singular tubes, `1 <= r <= min(n1, n2)`.
pub fn skinny_tsvd(a: &Tensor3, r: usize) -> Result<TSvd> {
    let dims = a.dims();
    if r == 0 || r > dims.n_min() {
        return Err(Error::Argument(format!(
            "skinny rank {r} outside 1..={}",
            dims.n_min()
        )));
    }
    assemble_tsvd(&spectral_svds(a)?, dims, r, true)
}

fn ranks_from_values(values: &[Vec<f64>], tol: f64) -> Vec<usize> {
    let global = values
        .iter()
        .flat_map(|s| s.first().copied())
        .fold(0.0f64, f64::max);
    if global == 0.0 {
        return vec![0; values.len()];
    }
    let cutoff = tol * global;
    values
        .iter()
        .map(|s| s.iter().filter(|&&v| v > cutoff).count())
        .collect()
}

/// Rank of every spectral slice: singular values above `tol` times the
/// largest singular value over all slices.
pub fn multi_rank(a: &Tensor3, tol: f64) -> Result<Vec<usize>> {
    check_tol(tol)?;
    Ok(ranks_from_values(&spectral_singular_values(a)?, tol))
}

/// Maximum of the multi rank.
pub fn tubal_rank(a: &Tensor3, tol: f64) -> Result<usize> {
    Ok(multi_rank(a, tol)?.into_iter().max().unwrap_or(0))
}

/// Mean of the multi rank.
pub fn average_rank(a: &Tensor3, tol: f64) -> Result<f64> {
    let ranks = multi_rank(a, tol)?;
    Ok(ranks.iter().sum::<usize>() as f64 / ranks.len() as f64)
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol >= 0.0) || !tol.is_finite() {
        return Err(Error::Argument(format!("rank tolerance {tol} must be finite and >= 0")));
    }
    Ok(())
}

/// Tensor nuclear norm: `(1/n3) sum_k ||Abar^(k)||_*`.
pub fn tnn(a: &Tensor3) -> Result<f64> {
    let values = spectral_singular_values(a)?;
    let total: f64 = values.iter().map(|s| s.iter().sum::<f64>()).sum();
    Ok(total / a.dims().n3 as f64)
}

/// Tensor spectral norm: the largest singular value over all spectral
/// slices.
pub fn spectral_norm(a: &Tensor3) -> Result<f64> {
    Ok(spectral_singular_values(a)?
        .iter()
        .flat_map(|s| s.first().copied())
        .fold(0.0, f64::max))
}
