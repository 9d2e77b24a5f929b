//! Dense third-order tensors.
//!
//! Entries are stored frontal-slice contiguous: the entry `(i, j, k)` lives at
//! flat position `i + n1 * j + n1 * n2 * k`. Each frontal slice is therefore a
//! column-major `n1 x n2` block, and the tube `(i, j, :)` is strided by
//! `n1 * n2`. All indices in this crate are zero-based.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Extents of a third-order tensor. All three are at least 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TensorDims {
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
}

impl TensorDims {
    pub fn new(n1: usize, n2: usize, n3: usize) -> Result<Self> {
        if n1 == 0 || n2 == 0 || n3 == 0 {
            return Err(Error::InvalidDims {
                n1,
                n2,
                n3,
                reason: "every extent must be at least 1",
            });
        }
        let len = n1.checked_mul(n2).and_then(|p| p.checked_mul(n3));
        if len.is_none_or(|l| l > isize::MAX as usize / std::mem::size_of::<f64>()) {
            return Err(Error::InvalidDims {
                n1,
                n2,
                n3,
                reason: "total size overflows",
            });
        }
        Ok(Self { n1, n2, n3 })
    }

    /// Total number of entries.
    pub fn len(&self) -> usize {
        self.n1 * self.n2 * self.n3
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `max(n1, n2)`.
    pub fn n_max(&self) -> usize {
        self.n1.max(self.n2)
    }

    /// `min(n1, n2)`.
    pub fn n_min(&self) -> usize {
        self.n1.min(self.n2)
    }

    /// Entries per frontal slice.
    pub fn slice_len(&self) -> usize {
        self.n1 * self.n2
    }

    #[inline]
    pub fn offset(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.n1 * (j + self.n2 * k)
    }

    pub(crate) fn check_index(&self, i: usize, j: usize, k: usize) -> Result<()> {
        for (index, extent) in [(i, self.n1), (j, self.n2), (k, self.n3)] {
            if index >= extent {
                return Err(Error::Index { index, extent });
            }
        }
        Ok(())
    }

    /// Dimensions of the transposed tensor.
    pub fn transposed(&self) -> Self {
        Self {
            n1: self.n2,
            n2: self.n1,
            n3: self.n3,
        }
    }
}

impl fmt::Display for TensorDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}x{}", self.n1, self.n2, self.n3)
    }
}

/// A dense real `n1 x n2 x n3` tensor with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor3 {
    dims: TensorDims,
    data: Vec<f64>,
}

impl Tensor3 {
    pub fn zeros(dims: TensorDims) -> Self {
        Self {
            dims,
            data: vec![0.0; dims.len()],
        }
    }

    /// Builds a tensor from entries in frontal-slice-contiguous order.
    pub fn from_vec(dims: TensorDims, data: Vec<f64>) -> Result<Self> {
        if data.len() != dims.len() {
            return Err(Error::Shape(format!(
                "{} entries supplied for a {dims} tensor",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(pos));
        }
        Ok(Self { dims, data })
    }

    pub fn from_fn(dims: TensorDims, mut f: impl FnMut(usize, usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(dims.len());
        for k in 0..dims.n3 {
            for j in 0..dims.n2 {
                for i in 0..dims.n1 {
                    data.push(f(i, j, k));
                }
            }
        }
        Self::from_vec(dims, data)
    }

    /// Stacks equally sized matrices as frontal slices.
    pub fn from_frontal_slices(slices: &[DMatrix<f64>]) -> Result<Self> {
        let first = slices
            .first()
            .ok_or_else(|| Error::Argument("no frontal slices supplied".into()))?;
        let dims = TensorDims::new(first.nrows(), first.ncols(), slices.len())?;
        let mut data = Vec::with_capacity(dims.len());
        for (k, s) in slices.iter().enumerate() {
            if s.shape() != first.shape() {
                return Err(Error::Shape(format!(
                    "slice {k} is {}x{}, expected {}x{}",
                    s.nrows(),
                    s.ncols(),
                    first.nrows(),
                    first.ncols()
                )));
            }
            data.extend_from_slice(s.as_slice());
        }
        Self::from_vec(dims, data)
    }

    /// Caller guarantees `data.len() == dims.len()` and finiteness.
    pub(crate) fn from_raw(dims: TensorDims, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), dims.len());
        Self { dims, data }
    }

    pub fn dims(&self) -> TensorDims {
        self.dims
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.dims.n1, self.dims.n2, self.dims.n3)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> Result<f64> {
        self.dims.check_index(i, j, k)?;
        Ok(self.data[self.dims.offset(i, j, k)])
    }

    /// Overwrites one entry. Panics if the index is out of range or `value`
    /// is not finite.
    pub fn set(&mut self, i: usize, j: usize, k: usize, value: f64) {
        assert!(value.is_finite(), "tensor entries must be finite");
        self.dims
            .check_index(i, j, k)
            .unwrap_or_else(|e| panic!("{e}"));
        let at = self.dims.offset(i, j, k);
        self.data[at] = value;
    }

    /// Borrowed view of frontal slice `k` as column-major `n1 x n2` data.
    pub fn slice_data(&self, k: usize) -> Result<&[f64]> {
        if k >= self.dims.n3 {
            return Err(Error::Index {
                index: k,
                extent: self.dims.n3,
            });
        }
        let len = self.dims.slice_len();
        Ok(&self.data[k * len..(k + 1) * len])
    }

    /// Copy of frontal slice `k`.
    pub fn frontal_slice(&self, k: usize) -> Result<DMatrix<f64>> {
        let data = self.slice_data(k)?;
        Ok(DMatrix::from_column_slice(self.dims.n1, self.dims.n2, data))
    }

    pub fn frontal_slices(&self) -> Vec<DMatrix<f64>> {
        (0..self.dims.n3)
            .map(|k| self.frontal_slice(k).expect("slice index in range"))
            .collect()
    }

    pub fn tube(&self, i: usize, j: usize) -> Result<Vec<f64>> {
        self.dims.check_index(i, j, 0)?;
        Ok((0..self.dims.n3)
            .map(|k| self.data[self.dims.offset(i, j, k)])
            .collect())
    }

    fn ensure_same_dims(&self, other: &Tensor3) -> Result<()> {
        if self.dims != other.dims {
            return Err(Error::Shape(format!("{} vs {}", self.dims, other.dims)));
        }
        Ok(())
    }

    /// `sum_ijk a_ijk * b_ijk`.
    pub fn inner_product(&self, other: &Tensor3) -> Result<f64> {
        self.ensure_same_dims(other)?;
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum())
    }

    pub fn norm_l1(&self) -> f64 {
        self.data.iter().map(|v| v.abs()).sum()
    }

    pub fn norm_inf(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn norm_fro(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Number of entries with `|a| > threshold`.
    pub fn count_above(&self, threshold: f64) -> usize {
        self.data.iter().filter(|v| v.abs() > threshold).count()
    }

    /// Applies `f` entrywise. Panics if `f` produces a non-finite value.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Tensor3 {
        let data: Vec<f64> = self.data.iter().map(|&v| f(v)).collect();
        assert!(data.iter().all(|v| v.is_finite()), "map produced a non-finite entry");
        Tensor3::from_raw(self.dims, data)
    }

    pub fn scale(&self, c: f64) -> Tensor3 {
        self.map(|v| c * v)
    }

    /// `self + alpha * other`.
    pub fn add_scaled(&self, alpha: f64, other: &Tensor3) -> Result<Tensor3> {
        self.ensure_same_dims(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + alpha * b)
            .collect();
        Ok(Tensor3::from_raw(self.dims, data))
    }

    /// `||self - other||_inf`.
    pub fn max_abs_diff(&self, other: &Tensor3) -> Result<f64> {
        self.ensure_same_dims(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }

    /// `||self - other||_F / ||reference||_F` with `reference = other`.
    pub fn relative_error(&self, reference: &Tensor3) -> Result<f64> {
        let diff = self.add_scaled(-1.0, reference)?.norm_fro();
        let denom = reference.norm_fro();
        Ok(if denom == 0.0 { diff } else { diff / denom })
    }
}

impl Index<(usize, usize, usize)> for Tensor3 {
    type Output = f64;

    fn index(&self, (i, j, k): (usize, usize, usize)) -> &f64 {
        self.dims
            .check_index(i, j, k)
            .unwrap_or_else(|e| panic!("{e}"));
        &self.data[self.dims.offset(i, j, k)]
    }
}

// Arithmetic operators panic on a dimension mismatch; use `add_scaled` for
// the fallible form.
impl Add for &Tensor3 {
    type Output = Tensor3;

    fn add(self, rhs: &Tensor3) -> Tensor3 {
        self.add_scaled(1.0, rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for &Tensor3 {
    type Output = Tensor3;

    fn sub(self, rhs: &Tensor3) -> Tensor3 {
        self.add_scaled(-1.0, rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul<f64> for &Tensor3 {
    type Output = Tensor3;

    fn mul(self, c: f64) -> Tensor3 {
        self.scale(c)
    }
}

impl Neg for &Tensor3 {
    type Output = Tensor3;

    fn neg(self) -> Tensor3 {
        self.scale(-1.0)
    }
}

/// Column basis: `n x 1 x n3` with a single 1 at `(i, 0, 0)`.
pub fn basis_column(i: usize, n: usize, n3: usize) -> Result<Tensor3> {
    basis_unit(i, 0, 0, TensorDims::new(n, 1, n3)?)
}

/// Tube basis: `1 x 1 x n3` with a single 1 at `(0, 0, k)`.
pub fn basis_tube(k: usize, n3: usize) -> Result<Tensor3> {
    basis_unit(0, 0, k, TensorDims::new(1, 1, n3)?)
}

/// Unit tensor `e_ijk`, equal to `basis_column(i) * basis_tube(k) * basis_column(j)^T`
/// under the t-product.
pub fn basis_unit(i: usize, j: usize, k: usize, dims: TensorDims) -> Result<Tensor3> {
    dims.check_index(i, j, k)?;
    let mut t = Tensor3::zeros(dims);
    t.data[dims.offset(i, j, k)] = 1.0;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dims(n1: usize, n2: usize, n3: usize) -> TensorDims {
        TensorDims::new(n1, n2, n3).unwrap()
    }

    fn ramp(d: TensorDims) -> Tensor3 {
        Tensor3::from_fn(d, |i, j, k| (i as f64) - 0.5 * j as f64 + 0.25 * (k * k) as f64 - 1.0)
            .unwrap()
    }

    #[test]
    fn zeros_has_expected_extent() {
        let z = Tensor3::zeros(dims(2, 2, 2));
        assert_eq!(z.as_slice(), &[0.0; 8]);
        let z = Tensor3::zeros(dims(1, 1, 1));
        assert_eq!(z[(0, 0, 0)], 0.0);
        let z = Tensor3::zeros(dims(3, 2, 4));
        assert_eq!(z.as_slice().len(), 24);
        assert_eq!(z.norm_fro(), 0.0);
    }

    #[test]
    fn invalid_dims_rejected() {
        assert!(matches!(TensorDims::new(0, 2, 2), Err(Error::InvalidDims { .. })));
        assert!(matches!(
            TensorDims::new(usize::MAX, 2, 2),
            Err(Error::InvalidDims { .. })
        ));
    }

    #[test]
    fn non_finite_rejected() {
        let d = dims(1, 2, 1);
        assert!(matches!(
            Tensor3::from_vec(d, vec![1.0, f64::NAN]),
            Err(Error::NonFinite(1))
        ));
        assert!(matches!(Tensor3::from_vec(d, vec![1.0]), Err(Error::Shape(_))));
    }

    #[test]
    fn layout_is_frontal_slice_contiguous() {
        let d = dims(2, 3, 2);
        let t = Tensor3::from_fn(d, |i, j, k| (100 * k + 10 * j + i) as f64).unwrap();
        assert_eq!(t.as_slice()[d.offset(1, 2, 1)], 121.0);
        assert_eq!(t.slice_data(1).unwrap()[0], 100.0);
        assert_eq!(t.tube(1, 2).unwrap(), vec![21.0, 121.0]);
    }

    #[test]
    fn frontal_slice_reads_back_entries() {
        let t = ramp(dims(3, 2, 3));
        let s = t.frontal_slice(1).unwrap();
        for i in 0..3 {
            for j in 0..2 {
                assert_eq!(s[(i, j)], t[(i, j, 1)]);
            }
        }
        assert!(matches!(t.frontal_slice(3), Err(Error::Index { index: 3, extent: 3 })));
    }

    #[test]
    fn inner_product_matches_hand_sum() {
        let d = dims(2, 2, 2);
        let a = Tensor3::from_vec(d, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0]).unwrap();
        let b = Tensor3::from_vec(d, vec![1.0, -1.0, 0.5, 2.0, 0.0, 1.0, -2.0, 0.25]).unwrap();
        // 1 - 2 + 1.5 + 8 + 0 + 6 - 14 + 2
        assert_eq!(a.inner_product(&b).unwrap(), 2.5);
        assert_eq!(a.inner_product(&Tensor3::zeros(d)).unwrap(), 0.0);
        let fro = a.norm_fro();
        assert!((a.inner_product(&a).unwrap() - fro * fro).abs() < 1e-12 * fro * fro);
        assert!(a.inner_product(&Tensor3::zeros(dims(2, 2, 1))).is_err());
    }

    #[test]
    fn norms_of_ones_and_zeros() {
        let ones = Tensor3::from_fn(dims(2, 2, 2), |_, _, _| 1.0).unwrap();
        assert_eq!(ones.norm_l1(), 8.0);
        assert_eq!(ones.norm_inf(), 1.0);
        assert!((ones.norm_fro() - 8f64.sqrt()).abs() < 1e-15);
        let z = Tensor3::zeros(dims(2, 2, 2));
        assert_eq!((z.norm_l1(), z.norm_inf(), z.norm_fro()), (0.0, 0.0, 0.0));
    }

    #[test]
    fn basis_tensors() {
        let e = basis_column(0, 2, 2).unwrap();
        assert_eq!(e.shape(), (2, 1, 2));
        assert_eq!(e.as_slice(), &[1.0, 0.0, 0.0, 0.0]);
        let t = basis_tube(2, 3).unwrap();
        assert_eq!(t.as_slice(), &[0.0, 0.0, 1.0]);
        assert!(basis_column(2, 2, 2).is_err());
        assert!(basis_tube(3, 3).is_err());
        assert!(basis_unit(0, 0, 5, dims(2, 2, 2)).is_err());
    }

    #[test]
    fn unit_basis_reads_and_reconstructs_entries() {
        let d = dims(2, 3, 2);
        let a = ramp(d);
        let mut recon = Tensor3::zeros(d);
        for k in 0..2 {
            for j in 0..3 {
                for i in 0..2 {
                    let e = basis_unit(i, j, k, d).unwrap();
                    let coeff = e.inner_product(&a).unwrap();
                    assert_eq!(coeff, a[(i, j, k)]);
                    recon = recon.add_scaled(coeff, &e).unwrap();
                }
            }
        }
        assert!(recon.max_abs_diff(&a).unwrap() <= 1e-12 * a.norm_fro());
    }

    #[test]
    #[should_panic(expected = "finite")]
    fn set_rejects_nan() {
        let mut t = Tensor3::zeros(dims(1, 1, 1));
        t.set(0, 0, 0, f64::INFINITY);
    }
}
