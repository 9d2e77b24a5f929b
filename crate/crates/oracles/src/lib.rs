//! Reference computations for testing `trpca-core`.
//!
//! Nothing here calls into the algebra, prox or solver modules of the core
//! crate; only the `Tensor3` container is shared. SVDs use one-sided Jacobi
//! rotations, DFTs are direct summations, and the t-product goes through the
//! dense block-circulant matrix.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trpca_core::{Tensor3, TensorDims};

pub mod suites;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn dims(n1: usize, n2: usize, n3: usize) -> TensorDims {
    TensorDims::new(n1, n2, n3).expect("valid test dims")
}

/// Entries uniform in `[-1, 1)`.
pub fn random_tensor(d: TensorDims, rng: &mut impl Rng) -> Tensor3 {
    Tensor3::from_fn(d, |_, _, _| rng.random_range(-1.0..1.0)).expect("finite")
}

/// Random extents, each in `1..=max`.
pub fn random_dims(max: (usize, usize, usize), rng: &mut impl Rng) -> TensorDims {
    dims(
        rng.random_range(1..=max.0),
        rng.random_range(1..=max.1),
        rng.random_range(1..=max.2),
    )
}

/// `||a - b||_F / ||b||_F` (absolute when `b = 0`).
pub fn rel_diff(a: &Tensor3, b: &Tensor3) -> f64 {
    let num: f64 = a
        .as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt();
    let den = b.norm_fro();
    if den == 0.0 {
        num
    } else {
        num / den
    }
}

/// One-sided Jacobi SVD. Returns `(W, V)` with `A V = W`, `V` orthogonal and
/// the columns of `W` mutually orthogonal; the singular values are the
/// column norms of `W`.
pub fn jacobi(a: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    let n = a.ncols();
    let mut w = a.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    jacobi_sweeps(&mut w, Some(&mut v));
    (w, v)
}

/// Two distinct columns of a column-major matrix, mutably.
fn column_pair(m: &mut DMatrix<f64>, p: usize, q: usize) -> (&mut [f64], &mut [f64]) {
    let rows = m.nrows();
    let (left, right) = m.as_mut_slice().split_at_mut(q * rows);
    (&mut left[p * rows..(p + 1) * rows], &mut right[..rows])
}

fn rotate(x: &mut [f64], y: &mut [f64], c: f64, s: f64) {
    for (xp, xq) in x.iter_mut().zip(y.iter_mut()) {
        let (a, b) = (*xp, *xq);
        *xp = c * a - s * b;
        *xq = s * a + c * b;
    }
}

fn jacobi_sweeps(w: &mut DMatrix<f64>, mut v: Option<&mut DMatrix<f64>>) {
    let n = w.ncols();
    // a dot product of `rows` terms is only accurate to about rows * eps
    let tol = (w.nrows() as f64 * f64::EPSILON).max(1e-15);
    // columns this small are rounding noise (wide or rank-deficient input)
    let negligible = (f64::EPSILON * w.norm()).powi(2);
    for _sweep in 0..200 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (cp, cq) = column_pair(w, p, q);
                let alpha: f64 = cp.iter().map(|x| x * x).sum();
                let beta: f64 = cq.iter().map(|x| x * x).sum();
                let gamma: f64 = cp.iter().zip(cq.iter()).map(|(x, y)| x * y).sum();
                if gamma.abs() <= tol * (alpha * beta).sqrt() || alpha.min(beta) <= negligible {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(cp, cq, c, s);
                if let Some(v) = v.as_deref_mut() {
                    let (vp, vq) = column_pair(v, p, q);
                    rotate(vp, vq, c, s);
                }
            }
        }
        if !rotated {
            break;
        }
    }
}

/// Singular values, descending.
pub fn singular_values(a: &DMatrix<f64>) -> Vec<f64> {
    let mut w = a.clone();
    jacobi_sweeps(&mut w, None);
    let mut s: Vec<f64> = w.column_iter().map(|c| c.norm()).collect();
    s.sort_by(|x, y| y.partial_cmp(x).unwrap());
    s
}

pub fn nuclear_norm(a: &DMatrix<f64>) -> f64 {
    singular_values(a).iter().sum()
}

pub fn matrix_spectral_norm(a: &DMatrix<f64>) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

/// Matrix singular value thresholding via Jacobi.
pub fn matrix_svt(a: &DMatrix<f64>, tau: f64) -> DMatrix<f64> {
    let (w, v) = jacobi(a);
    let mut out = DMatrix::zeros(a.nrows(), a.ncols());
    for c in 0..a.ncols() {
        let sigma = w.column(c).norm();
        if sigma > tau {
            let scale = (sigma - tau) / sigma;
            out += w.column(c) * v.column(c).transpose() * scale;
        }
    }
    out
}

/// Direct `O(n^2)` forward DFT.
pub fn naive_dft(x: &[Complex64]) -> Vec<Complex64> {
    let n = x.len();
    (0..n)
        .map(|f| {
            x.iter()
                .enumerate()
                .map(|(t, &v)| v * Complex64::from_polar(1.0, -2.0 * PI * ((f * t) % n) as f64 / n as f64))
                .sum()
        })
        .collect()
}

/// Spectral slices of `a` by direct DFT of every tube.
pub fn naive_spectral_slices(a: &Tensor3) -> Vec<DMatrix<Complex64>> {
    let d = a.dims();
    let mut slices = vec![DMatrix::zeros(d.n1, d.n2); d.n3];
    for i in 0..d.n1 {
        for j in 0..d.n2 {
            let tube: Vec<Complex64> = (0..d.n3).map(|k| Complex64::new(a[(i, j, k)], 0.0)).collect();
            for (k, z) in naive_dft(&tube).into_iter().enumerate() {
                slices[k][(i, j)] = z;
            }
        }
    }
    slices
}

/// The `n x n` DFT matrix `F[f, t] = exp(-2 pi i f t / n)`.
pub fn dft_matrix(n: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(n, n, |f, t| Complex64::from_polar(1.0, -2.0 * PI * ((f * t) % n) as f64 / n as f64))
}

/// Kronecker product `F (x) I_m` for complex `F`.
pub fn kron_identity(f: &DMatrix<Complex64>, m: usize) -> DMatrix<Complex64> {
    let n = f.nrows();
    DMatrix::from_fn(n * m, f.ncols() * m, |r, c| {
        if r % m == c % m {
            f[(r / m, c / m)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Block-circulant matrix built entry by entry: block `(r, c)` holds frontal
/// slice `(r - c) mod n3`.
pub fn dense_bcirc(a: &Tensor3) -> DMatrix<f64> {
    let d = a.dims();
    DMatrix::from_fn(d.n1 * d.n3, d.n2 * d.n3, |row, col| {
        let (br, i) = (row / d.n1, row % d.n1);
        let (bc, j) = (col / d.n2, col % d.n2);
        a[(i, j, (br + d.n3 - bc) % d.n3)]
    })
}

/// t-product by explicit circular convolution of tubes:
/// `C(i, l, k) = sum_j sum_t A(i, j, t) B(j, l, (k - t) mod n3)`.
pub fn convolution_tprod(a: &Tensor3, b: &Tensor3) -> Tensor3 {
    let (da, db) = (a.dims(), b.dims());
    assert_eq!((da.n2, da.n3), (db.n1, db.n3));
    let n3 = da.n3;
    Tensor3::from_fn(dims(da.n1, db.n2, n3), |i, l, k| {
        let mut acc = 0.0;
        for j in 0..da.n2 {
            for t in 0..n3 {
                acc += a[(i, j, t)] * b[(j, l, (k + n3 - t) % n3)];
            }
        }
        acc
    })
    .expect("finite")
}

/// Transpose by definition: `A^T(j, i, k) = A(i, j, (n3 - k) mod n3)`.
pub fn definition_transpose(a: &Tensor3) -> Tensor3 {
    let d = a.dims();
    Tensor3::from_fn(dims(d.n2, d.n1, d.n3), |j, i, k| a[(i, j, (d.n3 - k) % d.n3)]).expect("finite")
}

/// Tensor nuclear norm as `(1/n3) ||bcirc(A)||_*` with a Jacobi SVD.
pub fn bcirc_tnn(a: &Tensor3) -> f64 {
    nuclear_norm(&dense_bcirc(a)) / a.dims().n3 as f64
}

pub fn bcirc_spectral_norm(a: &Tensor3) -> f64 {
    matrix_spectral_norm(&dense_bcirc(a))
}

/// Incoherence parameters `(mu_u, mu_v, mu_joint)` at tubal rank `r`, from
/// orthonormal bases of the range and co-range of `bcirc(L)`. Valid when
/// every spectral slice of `L` has rank `r`.
///
/// `||U^T * e_i||_F^2` is `(1/n3)` times the energy of rows `i + n1 k` of the
/// range basis, and `bcirc(U * V^T)` is the product of the two bases.
pub fn incoherence_via_bcirc(l: &Tensor3, r: usize) -> (f64, f64, f64) {
    let d = l.dims();
    let (w, v) = jacobi(&dense_bcirc(l));
    let norms: Vec<f64> = w.column_iter().map(|c| c.norm()).collect();
    let top = norms.iter().copied().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..norms.len()).filter(|&c| norms[c] > 1e-10 * top).collect();
    let q = DMatrix::from_fn(w.nrows(), keep.len(), |row, c| w[(row, keep[c])] / norms[keep[c]]);
    let p = DMatrix::from_fn(v.nrows(), keep.len(), |row, c| v[(row, keep[c])]);
    let n3 = d.n3 as f64;
    let energy = |basis: &DMatrix<f64>, n: usize, i: usize| -> f64 {
        (0..d.n3).map(|k| basis.row(i + n * k).norm_squared()).sum::<f64>() / n3
    };
    let max_u = (0..d.n1).map(|i| energy(&q, d.n1, i)).fold(0.0, f64::max);
    let max_v = (0..d.n2).map(|j| energy(&p, d.n2, j)).fold(0.0, f64::max);
    let joint = (&q * p.transpose()).amax();
    let r = r as f64;
    (
        d.n1 as f64 * n3 / r * max_u,
        d.n2 as f64 * n3 / r * max_v,
        (d.n1 * d.n2) as f64 * n3 * n3 / r * joint * joint,
    )
}

/// Scalar l1 prox by a fine grid search then bisection refinement.
pub fn scalar_prox_search(y: f64, tau: f64) -> f64 {
    let f = |e: f64| tau * e.abs() + 0.5 * (e - y) * (e - y);
    let (lo, hi) = (-y.abs() - 1.0, y.abs() + 1.0);
    let steps = 20_000;
    let mut best = lo;
    for s in 0..=steps {
        let e = lo + (hi - lo) * s as f64 / steps as f64;
        if f(e) < f(best) {
            best = e;
        }
    }
    let h = (hi - lo) / steps as f64;
    let (mut a, mut b) = (best - h, best + h);
    // convex objective: bisect on the sign of the right derivative
    let slope = |e: f64| e - y + if e >= 0.0 { tau } else { -tau };
    for _ in 0..200 {
        let c = 0.5 * (a + b);
        if slope(c) > 0.0 {
            b = c;
        } else {
            a = c;
        }
    }
    let mid = 0.5 * (a + b);
    // the kink at 0 is a minimizer whenever |y| <= tau
    if f(0.0) <= f(mid) {
        0.0
    } else {
        mid
    }
}

/// Random direction with the requested Frobenius norm.
pub fn random_perturbation(d: TensorDims, radius: f64, rng: &mut impl Rng) -> Tensor3 {
    let raw = random_tensor(d, rng);
    let n = raw.norm_fro();
    raw.map(|v| v * radius / n)
}

/// Counts perturbations `delta` (random directions at each radius) for which
/// `objective(point + delta) <= objective(point)`.
pub fn perturbation_failures(
    objective: impl Fn(&Tensor3) -> f64,
    point: &Tensor3,
    radii: &[f64],
    per_radius: usize,
    rng: &mut impl Rng,
) -> usize {
    let base = objective(point);
    let mut failures = 0;
    for &radius in radii {
        for _ in 0..per_radius {
            let delta = random_perturbation(point.dims(), radius, rng);
            if objective(&(point + &delta)) <= base {
                failures += 1;
            }
        }
    }
    failures
}

/// One iterate of the matrix reference ADMM.
#[derive(Clone, Debug)]
pub struct MatrixIterate {
    pub l: DMatrix<f64>,
    pub e: DMatrix<f64>,
    pub y: DMatrix<f64>,
    pub mu: f64,
}

/// Matrix robust PCA by the same ADMM scheme, written directly on matrices
/// with a Jacobi-based SVT. Returns every iterate and whether the stopping
/// test was met.
#[allow(clippy::too_many_arguments)]
pub fn matrix_rpca_reference(
    x: &DMatrix<f64>,
    lambda: f64,
    rho: f64,
    mu0: f64,
    mu_max: f64,
    eps: f64,
    max_iter: usize,
) -> (Vec<MatrixIterate>, bool) {
    let (m, n) = x.shape();
    let mut l = DMatrix::zeros(m, n);
    let mut e = DMatrix::zeros(m, n);
    let mut y = DMatrix::zeros(m, n);
    let mut mu = mu0;
    let mut trace = Vec::new();
    let inf = |a: &DMatrix<f64>| a.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    for _ in 0..max_iter {
        let l_next = matrix_svt(&(x - &e - &y / mu), 1.0 / mu);
        let t = lambda / mu;
        let e_next = (x - &l_next - &y / mu).map(|v| v.signum() * (v.abs() - t).max(0.0));
        let gap = &l_next + &e_next - x;
        y += &gap * mu;
        let stop = inf(&(&l_next - &l)) <= eps && inf(&(&e_next - &e)) <= eps && inf(&gap) <= eps;
        trace.push(MatrixIterate {
            l: l_next.clone(),
            e: e_next.clone(),
            y: y.clone(),
            mu,
        });
        l = l_next;
        e = e_next;
        mu = (rho * mu).min(mu_max);
        if stop {
            return (trace, true);
        }
    }
    (trace, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_on_known_matrix() {
        // singular values of [[3, 0], [4, 5]] are sqrt(45) and sqrt(5)
        let a = DMatrix::from_row_slice(2, 2, &[3.0, 0.0, 4.0, 5.0]);
        let s = singular_values(&a);
        assert!((s[0] - 45f64.sqrt()).abs() < 1e-12);
        assert!((s[1] - 5f64.sqrt()).abs() < 1e-12);
        let wide = DMatrix::from_row_slice(1, 3, &[1.0, 2.0, 2.0]);
        assert!((singular_values(&wide)[0] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn svt_reconstructs_when_threshold_tiny() {
        let a = DMatrix::from_fn(4, 3, |i, j| (i as f64 - 1.5) * (j as f64 + 0.5) + (i * j) as f64);
        let back = matrix_svt(&a, 1e-300);
        assert!((back - &a).norm() < 1e-12 * a.norm());
    }

    #[test]
    fn scalar_search_finds_prox() {
        assert!((scalar_prox_search(2.0, 0.5) - 1.5).abs() < 1e-9);
        assert!((scalar_prox_search(-2.0, 0.5) + 1.5).abs() < 1e-9);
        assert_eq!(scalar_prox_search(0.3, 0.5), 0.0);
    }
}
