use trpca_core::SolverConfig;
use trpca_oracles::rng;
use trpca_oracles::suites::{algebra_suite, prox_suite, reduction_suite};

#[test]
fn algebra_matches_references() {
    let r = algebra_suite(120, (6, 6, 4), &mut rng(11));
    println!("{r:#?}");
    assert!(r.tprod <= 1e-10);
    assert_eq!(r.bcirc, 0.0);
    assert!(r.tnn <= 1e-8);
    assert!(r.spectral_norm <= 1e-8);
    assert!(r.reconstruction <= 1e-9);
    assert!(r.orthogonality <= 1e-9);
    assert!(r.parseval <= 1e-10);
    assert!(r.dft <= 1e-12);
    assert!(r.block_diagonal <= 1e-8);
}

#[test]
fn algebra_on_larger_and_degenerate_shapes() {
    let r = algebra_suite(15, (9, 3, 7), &mut rng(12));
    assert!(r.tprod <= 1e-10 && r.tnn <= 1e-8 && r.reconstruction <= 1e-9 && r.block_diagonal <= 1e-8, "{r:#?}");
    let r = algebra_suite(15, (1, 8, 5), &mut rng(13));
    assert!(r.tprod <= 1e-10 && r.tnn <= 1e-8 && r.reconstruction <= 1e-9 && r.block_diagonal <= 1e-8, "{r:#?}");
}

#[test]
fn prox_operators_are_minimizers() {
    let r = prox_suite(6, 200, &[1e-3, 1e-2], (5, 5, 4), &mut rng(21));
    println!("{r:#?}");
    assert_eq!(r.tsvt_failures, 0);
    assert_eq!(r.shrink_failures, 0);
    assert!(r.svt_matrix_diff <= 1e-9);
    assert!(r.shrink_scalar_diff <= 1e-9);
}

#[test]
fn matrix_case_follows_reference_trajectory() {
    let config = SolverConfig::default();
    let r = reduction_suite(&[(30, 25, 2), (20, 40, 1), (36, 36, 3), (12, 9, 2)], 0.05, &config, &mut rng(31));
    println!("{r:#?}");
    assert!(r.primal_diff <= 1e-10);
    assert!(r.scaled_dual_diff <= 1e-10);
    assert!(r.dual_diff <= 1e-15 * r.max_mu.max(1.0) * 1e3);
    assert_eq!(r.mu_diff, 0.0);
    assert_eq!(r.lambda_diff, 0.0);
    assert!(r.same_stopping);
}

#[test]
fn matrix_case_agrees_when_iteration_capped() {
    let config = SolverConfig {
        max_iter: 7,
        ..SolverConfig::default()
    };
    let r = reduction_suite(&[(9, 6, 2)], 0.1, &config, &mut rng(32));
    assert!(r.primal_diff <= 1e-10 && r.scaled_dual_diff <= 1e-10 && r.same_stopping, "{r:#?}");
    assert_eq!(r.total_iterations, 7);
}

#[test]
fn single_slice_operations_are_matrix_operations() {
    use nalgebra::DMatrix;
    use trpca_core::{spectral_norm, tnn, tprod, tsvd, ttranspose};
    use trpca_oracles::{dims, matrix_spectral_norm, nuclear_norm, random_tensor, singular_values};
    let mut g = rng(41);
    for _ in 0..50 {
        let a = random_tensor(dims(5, 4, 1), &mut g);
        let b = random_tensor(dims(4, 3, 1), &mut g);
        let ma = DMatrix::from_column_slice(5, 4, a.as_slice());
        let mb = DMatrix::from_column_slice(4, 3, b.as_slice());
        let prod = tprod(&a, &b).unwrap();
        let want = &ma * &mb;
        assert!(prod.as_slice().iter().zip(want.iter()).all(|(x, y)| (x - y).abs() <= 1e-12));
        assert!((tnn(&a).unwrap() - nuclear_norm(&ma)).abs() <= 1e-12 * nuclear_norm(&ma));
        assert!((spectral_norm(&a).unwrap() - matrix_spectral_norm(&ma)).abs() <= 1e-12 * matrix_spectral_norm(&ma));
        let t = ttranspose(&a);
        assert_eq!(t.as_slice(), ma.transpose().as_slice());
        let f = tsvd(&a).unwrap();
        let s: Vec<f64> = (0..4).map(|i| f.s[(i, i, 0)]).collect();
        for (x, y) in s.iter().zip(singular_values(&ma)) {
            assert!((x - y).abs() <= 1e-12);
        }
    }
}
