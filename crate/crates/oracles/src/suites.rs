//! Randomized comparisons of `trpca-core` against the references in this
//! crate. Each suite returns the worst observed discrepancies; callers
//! decide the tolerances.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use trpca_core::solver::solve_observed;
use trpca_core::{bcirc, default_lambda, dft3, soft_threshold, spectral_norm, tnn, tprod, tsvd, tsvt, SolverConfig, Tensor3};

use crate::*;

/// Worst errors over an algebra run. All are relative unless noted.
#[derive(Clone, Debug, Default)]
pub struct AlgebraReport {
    pub instances: usize,
    /// t-product against circular convolution.
    pub tprod: f64,
    /// Core `bcirc` against the entrywise definition (absolute).
    pub bcirc: f64,
    pub tnn: f64,
    pub spectral_norm: f64,
    pub reconstruction: f64,
    /// `U^T * U - I` and `V^T * V - I` in Frobenius norm, via the reference
    /// t-product.
    pub orthogonality: f64,
    /// `||A||_F^2` against `(1/n3) sum_k ||Abar^(k)||_F^2`.
    pub parseval: f64,
    /// Core DFT against direct summation.
    pub dft: f64,
    /// Largest entry of `(F (x) I) bcirc(A) (F^-1 (x) I) - blockdiag(Abar)`
    /// over the largest entry of `blockdiag(Abar)`.
    pub block_diagonal: f64,
}

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        (a - b).abs() / b.abs()
    }
}

fn identity(n: usize, n3: usize) -> Tensor3 {
    Tensor3::from_fn(dims(n, n, n3), |i, j, k| if i == j && k == 0 { 1.0 } else { 0.0 }).expect("finite")
}

fn orthogonality_error(q: &Tensor3) -> f64 {
    let d = q.dims();
    let gram = convolution_tprod(&definition_transpose(q), q);
    rel_diff(&gram, &identity(d.n2, d.n3)) * (d.n2 as f64).sqrt()
}

fn block_diagonal_error(a: &Tensor3) -> f64 {
    let d = a.dims();
    let f = dft_matrix(d.n3);
    let f_inv = f.map(|z| z.conj() / d.n3 as f64);
    let left = kron_identity(&f, d.n1);
    let right = kron_identity(&f_inv, d.n2);
    let b = dense_bcirc(a).map(|v| Complex64::new(v, 0.0));
    let product = left * b * right;
    let slices = naive_spectral_slices(a);
    let mut expected = DMatrix::<Complex64>::zeros(d.n1 * d.n3, d.n2 * d.n3);
    for (k, s) in slices.iter().enumerate() {
        expected.view_mut((k * d.n1, k * d.n2), (d.n1, d.n2)).copy_from(s);
    }
    let scale = expected.iter().fold(0.0f64, |m, z| m.max(z.norm())).max(f64::MIN_POSITIVE);
    let worst = product
        .iter()
        .zip(expected.iter())
        .fold(0.0f64, |m, (x, y)| m.max((x - y).norm()));
    worst / scale
}

/// Random instances with every extent up to `max`.
pub fn algebra_suite(count: usize, max: (usize, usize, usize), rng: &mut impl Rng) -> AlgebraReport {
    let mut r = AlgebraReport {
        instances: count,
        ..Default::default()
    };
    for _ in 0..count {
        let d = random_dims(max, rng);
        let a = random_tensor(d, rng);
        let p = rng.random_range(1..=max.1);
        let b = random_tensor(dims(d.n2, p, d.n3), rng);

        let c = tprod(&a, &b).expect("conformant");
        r.tprod = r.tprod.max(rel_diff(&c, &convolution_tprod(&a, &b)));

        let bc = bcirc(&a);
        let dense = dense_bcirc(&a);
        r.bcirc = r.bcirc.max((bc - &dense).amax());

        r.tnn = r.tnn.max(rel(tnn(&a).unwrap(), bcirc_tnn(&a)));
        r.spectral_norm = r.spectral_norm.max(rel(spectral_norm(&a).unwrap(), bcirc_spectral_norm(&a)));

        let f = tsvd(&a).unwrap();
        let back = convolution_tprod(&convolution_tprod(&f.u, &f.s), &definition_transpose(&f.v));
        r.reconstruction = r.reconstruction.max(rel_diff(&back, &a));
        r.orthogonality = r
            .orthogonality
            .max(orthogonality_error(&f.u).max(orthogonality_error(&f.v)));

        let spec = dft3(&a);
        let naive = naive_spectral_slices(&a);
        let energy: f64 = spec.as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>() / d.n3 as f64;
        r.parseval = r.parseval.max(rel(energy, a.norm_fro().powi(2)));
        let scale = naive.iter().flat_map(|s| s.iter()).fold(0.0f64, |m, z| m.max(z.norm()));
        let dft_err = spec
            .slices()
            .iter()
            .zip(&naive)
            .flat_map(|(x, y)| x.iter().zip(y.iter()).map(|(p, q)| (p - q).norm()).collect::<Vec<_>>())
            .fold(0.0f64, f64::max);
        r.dft = r.dft.max(dft_err / scale);

        r.block_diagonal = r.block_diagonal.max(block_diagonal_error(&a));
    }
    r
}

fn half_sq_dist(a: &Tensor3, b: &Tensor3) -> f64 {
    0.5 * a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| (x - y) * (x - y)).sum::<f64>()
}

/// Outcome of perturbation tests for a proximal operator.
#[derive(Clone, Debug, Default)]
pub struct ProxReport {
    pub instances: usize,
    pub perturbations: usize,
    /// Perturbed points with objective not strictly above the prox output.
    pub tsvt_failures: usize,
    pub shrink_failures: usize,
    /// Matrix SVT against core `tsvt` at `n3 = 1`, relative.
    pub svt_matrix_diff: f64,
    /// Scalar search against core soft thresholding, absolute.
    pub shrink_scalar_diff: f64,
}

/// `instances` random problems up to `max`, each tested with `per_radius`
/// perturbations at every radius.
pub fn prox_suite(
    instances: usize,
    per_radius: usize,
    radii: &[f64],
    max: (usize, usize, usize),
    rng: &mut impl Rng,
) -> ProxReport {
    let mut r = ProxReport {
        instances,
        perturbations: per_radius * radii.len(),
        ..Default::default()
    };
    for _ in 0..instances {
        let d = random_dims(max, rng);
        let y = random_tensor(d, rng).scale(3.0);
        let tau = rng.random_range(0.1..1.5);

        let l = tsvt(&y, tau).unwrap();
        let obj_l = |z: &Tensor3| tau * bcirc_tnn(z) + half_sq_dist(z, &y);
        r.tsvt_failures += perturbation_failures(obj_l, &l, radii, per_radius, rng);

        let e = soft_threshold(&y, tau).unwrap();
        let obj_e = |z: &Tensor3| tau * z.as_slice().iter().map(|v| v.abs()).sum::<f64>() + half_sq_dist(z, &y);
        r.shrink_failures += perturbation_failures(obj_e, &e, radii, per_radius, rng);

        let m = random_tensor(dims(d.n1, d.n2, 1), rng).scale(3.0);
        let core = tsvt(&m, tau).unwrap();
        let mat = DMatrix::from_column_slice(d.n1, d.n2, m.as_slice());
        let want = matrix_svt(&mat, tau);
        let diff = core.as_slice().iter().zip(want.iter()).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        r.svt_matrix_diff = r.svt_matrix_diff.max(diff / want.norm().max(1.0));

        for (&v, &s) in m.as_slice().iter().zip(soft_threshold(&m, tau).unwrap().as_slice()) {
            r.shrink_scalar_diff = r.shrink_scalar_diff.max((scalar_prox_search(v, tau) - s).abs());
        }
    }
    r
}

/// Agreement of the tensor solver at `n3 = 1` with the matrix reference.
#[derive(Clone, Debug, Default)]
pub struct ReductionReport {
    pub problems: usize,
    /// Largest per-iterate difference in L or E, relative to
    /// `max(1, ||X||_inf)`.
    pub primal_diff: f64,
    /// Largest per-iterate difference in the scaled dual `Y / mu`, same
    /// normalization.
    pub scaled_dual_diff: f64,
    /// Largest per-iterate difference in `Y` itself. Roundoff in the
    /// feasibility gap enters `Y` multiplied by `mu`, so this grows like
    /// `mu * eps` whatever the implementation.
    pub dual_diff: f64,
    pub mu_diff: f64,
    pub lambda_diff: f64,
    /// All problems stopped at the same iteration with the same flag.
    pub same_stopping: bool,
    pub total_iterations: usize,
    pub max_mu: f64,
}

/// Low rank plus sparse test matrix of size `m x n`: a product of uniform
/// factors with `density` of its entries offset by +-1.
pub fn rpca_test_matrix(m: usize, n: usize, rank: usize, density: f64, rng: &mut impl Rng) -> DMatrix<f64> {
    let a = DMatrix::from_fn(m, rank, |_, _| rng.random_range(-1.0..1.0));
    let b = DMatrix::from_fn(rank, n, |_, _| rng.random_range(-1.0..1.0));
    let mut x = a * b;
    for v in x.iter_mut() {
        if rng.random::<f64>() < density {
            *v += if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        }
    }
    x
}

/// Runs both solvers on `rpca_test_matrix(m, n, rank, density)` for each
/// shape and compares every iterate.
pub fn reduction_suite(shapes: &[(usize, usize, usize)], density: f64, config: &SolverConfig, rng: &mut impl Rng) -> ReductionReport {
    let mut r = ReductionReport {
        problems: shapes.len(),
        same_stopping: true,
        ..Default::default()
    };
    let max_diff = |got: &Tensor3, exp: &DMatrix<f64>, scale: f64| {
        got.as_slice().iter().zip(exp.iter()).fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs() * scale))
    };
    for &(m, n, rank) in shapes {
        let x = rpca_test_matrix(m, n, rank, density, rng);
        let lambda = 1.0 / (m.max(n) as f64).sqrt();
        let (reference, ref_converged) =
            matrix_rpca_reference(&x, lambda, config.rho, config.mu0, config.mu_max, config.eps, config.max_iter);

        let t = Tensor3::from_vec(dims(m, n, 1), x.as_slice().to_vec()).unwrap();
        let norm = 1.0 / x.amax().max(1.0);
        let mut k = 0;
        let out = solve_observed(&t, config, |it| {
            let Some(want) = reference.get(k) else {
                r.primal_diff = f64::INFINITY;
                return;
            };
            r.primal_diff = r
                .primal_diff
                .max(max_diff(it.low_rank, &want.l, norm))
                .max(max_diff(it.sparse, &want.e, norm));
            let dual = max_diff(it.dual, &want.y, 1.0);
            r.dual_diff = r.dual_diff.max(dual);
            r.scaled_dual_diff = r.scaled_dual_diff.max(dual / it.mu * norm);
            r.mu_diff = r.mu_diff.max(rel(it.mu, want.mu));
            r.max_mu = r.max_mu.max(it.mu);
            k += 1;
        })
        .unwrap();
        r.lambda_diff = r
            .lambda_diff
            .max(rel(out.lambda, lambda).max(rel(default_lambda(t.dims()), lambda)));
        r.same_stopping &= out.iterations == reference.len() && out.converged == ref_converged;
        r.total_iterations += out.iterations;
    }
    r
}
