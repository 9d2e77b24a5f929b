//! The DFT along the third dimension.
//!
//! Forward transforms are unnormalized and inverse transforms carry the
//! `1/n3` factor, so that `||A||_F^2 = (1/n3) sum_k ||Abar^(k)||_F^2`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

use crate::error::{Error, Result};
pub(crate) use crate::parallel::par_map as map_slices;
use crate::tensor::{Tensor3, TensorDims};

/// Relative imaginary residue above which an inverse transform is rejected.
pub const SYMMETRY_TOL: f64 = 1e-8;

/// Complex `n1 x n2 x n3` array holding the frontal slices `Abar^(k)` of a
/// transformed tensor. Same layout as [`Tensor3`].
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralTensor3 {
    dims: TensorDims,
    data: Vec<Complex64>,
}

impl SpectralTensor3 {
    pub fn zeros(dims: TensorDims) -> Self {
        Self {
            dims,
            data: vec![Complex64::new(0.0, 0.0); dims.len()],
        }
    }

    pub fn from_vec(dims: TensorDims, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dims.len() {
            return Err(Error::Shape(format!(
                "{} entries supplied for a {dims} spectral tensor",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|z| !z.is_finite()) {
            return Err(Error::NonFinite(pos));
        }
        Ok(Self { dims, data })
    }

    /// Stacks `n3` equally sized complex matrices.
    pub fn from_slices(slices: &[DMatrix<Complex64>]) -> Result<Self> {
        let first = slices
            .first()
            .ok_or_else(|| Error::Argument("no spectral slices supplied".into()))?;
        let dims = TensorDims::new(first.nrows(), first.ncols(), slices.len())?;
        let mut data = Vec::with_capacity(dims.len());
        for s in slices {
            if s.shape() != first.shape() {
                return Err(Error::Shape("spectral slices differ in shape".into()));
            }
            data.extend_from_slice(s.as_slice());
        }
        Self::from_vec(dims, data)
    }

    pub fn dims(&self) -> TensorDims {
        self.dims
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> Result<Complex64> {
        self.dims.check_index(i, j, k)?;
        Ok(self.data[self.dims.offset(i, j, k)])
    }

    /// Copy of spectral slice `k`.
    pub fn slice(&self, k: usize) -> Result<DMatrix<Complex64>> {
        if k >= self.dims.n3 {
            return Err(Error::Index {
                index: k,
                extent: self.dims.n3,
            });
        }
        let len = self.dims.slice_len();
        Ok(DMatrix::from_column_slice(
            self.dims.n1,
            self.dims.n2,
            &self.data[k * len..(k + 1) * len],
        ))
    }

    pub fn slices(&self) -> Vec<DMatrix<Complex64>> {
        (0..self.dims.n3)
            .map(|k| self.slice(k).expect("slice index in range"))
            .collect()
    }

    /// Largest `|Abar^(k) - conj(Abar^(n3-k))|` over all entries and
    /// `k = 1..n3`, relative to the largest entry modulus.
    pub fn symmetry_residue(&self) -> f64 {
        let n3 = self.dims.n3;
        let len = self.dims.slice_len();
        let scale = self.data.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst = 0.0f64;
        for k in 0..n3 {
            let mirror = (n3 - k) % n3;
            for p in 0..len {
                let a = self.data[k * len + p];
                let b = self.data[mirror * len + p].conj();
                worst = worst.max((a - b).norm());
            }
        }
        worst / scale
    }
}

/// Number of spectral slices that determine the rest for real input:
/// `k = 0..=n3/2`.
pub fn half_spectrum_len(n3: usize) -> usize {
    n3 / 2 + 1
}

/// Completes a half spectrum (slices `0..=n3/2`) by conjugate mirroring.
pub(crate) fn mirror_half<T: Clone>(mut half: Vec<T>, n3: usize, conj: impl Fn(&T) -> T) -> Vec<T> {
    debug_assert_eq!(half.len(), half_spectrum_len(n3));
    for k in half_spectrum_len(n3)..n3 {
        let m = conj(&half[n3 - k]);
        half.push(m);
    }
    half
}

fn transform_tubes(dims: TensorDims, data: &mut [Complex64], direction: FftDirection) {
    let n3 = dims.n3;
    if n3 == 1 {
        return;
    }
    let len = dims.slice_len();
    // Gather tubes contiguously so one batched FFT call covers them all.
    let mut tubes = vec![Complex64::new(0.0, 0.0); data.len()];
    for k in 0..n3 {
        for p in 0..len {
            tubes[p * n3 + k] = data[k * len + p];
        }
    }
    let fft = FftPlanner::<f64>::new().plan_fft(n3, direction);
    fft.process(&mut tubes);
    for k in 0..n3 {
        for p in 0..len {
            data[k * len + p] = tubes[p * n3 + k];
        }
    }
}

/// Forward DFT of every tube `A(i, j, :)`.
pub fn dft3(a: &Tensor3) -> SpectralTensor3 {
    let dims = a.dims();
    let mut data: Vec<Complex64> = a.as_slice().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    transform_tubes(dims, &mut data, FftDirection::Forward);
    SpectralTensor3 { dims, data }
}

/// Inverse DFT with `1/n3` normalization. The imaginary part of the result
/// must be negligible (at most [`SYMMETRY_TOL`] times the largest output
/// modulus) and is then discarded.
pub fn idft3(spec: &SpectralTensor3) -> Result<Tensor3> {
    let dims = spec.dims;
    let mut data = spec.data.clone();
    transform_tubes(dims, &mut data, FftDirection::Inverse);
    let inv = 1.0 / dims.n3 as f64;
    let mut scale = 0.0f64;
    let mut residue = 0.0f64;
    for z in &mut data {
        *z *= inv;
        scale = scale.max(z.norm());
        residue = residue.max(z.im.abs());
    }
    let limit = SYMMETRY_TOL * scale;
    if residue > limit {
        return Err(Error::SymmetryViolation { residue, limit });
    }
    Ok(Tensor3::from_raw(dims, data.into_iter().map(|z| z.re).collect()))
}
