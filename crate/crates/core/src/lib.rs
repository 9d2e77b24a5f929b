//! Tensor robust principal component analysis on the t-product algebra.
//!
//! A third-order tensor `X = L + E` is split into a part `L` with low tubal
//! rank and a sparse part `E` by minimizing `||L||_* + lambda ||E||_1`, where
//! `||.||_*` is the tensor nuclear norm (the average nuclear norm of the
//! Fourier-domain frontal slices). The crate provides the dense tensor type,
//! the t-product / t-SVD algebra, the proximal operators, the ADMM solver, and
//! the synthetic and image-denoising experiments built on top.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod error;
pub mod imaging;
pub mod io;
pub mod linalg;
pub mod netpbm;
mod parallel;
pub mod prox;
pub mod solver;
pub mod spectral;
pub mod synth;
pub mod tensor;

pub use algebra::{
    average_rank, bcirc, fold, identity_tensor, is_orthogonal, multi_rank, skinny_tsvd, spectral_norm, tnn,
    tprod, tprod_oracle, tsvd, ttranspose, tubal_rank, unfold, TSvd, DEFAULT_RANK_TOL,
};
pub use error::{Error, Result};
pub use prox::{soft_threshold, tsvt};
pub use solver::{default_lambda, incoherence_report, solve, IncoherenceReport, SolverConfig, TrpcaResult};
pub use spectral::{dft3, idft3, SpectralTensor3};
pub use tensor::{basis_column, basis_tube, basis_unit, Tensor3, TensorDims};
