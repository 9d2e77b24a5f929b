use trpca_core::synth::{
    gen_low_rank, gen_sparse_bernoulli, gen_sparse_uniform, linspace, phase_grid, rank_for_fraction, run_trial,
    write_grid_matrix_csv, write_trials_csv, SparsityModel, TrialSpec,
};
use trpca_core::{tubal_rank, SolverConfig, Tensor3, TensorDims, DEFAULT_RANK_TOL};

fn dims(n1: usize, n2: usize, n3: usize) -> TensorDims {
    TensorDims::new(n1, n2, n3).unwrap()
}

fn sample_variance(samples: &[Tensor3]) -> f64 {
    let values: Vec<f64> = samples.iter().flat_map(|t| t.as_slice().iter().copied()).collect();
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
}

#[test]
fn low_rank_has_requested_tubal_rank() {
    let d = dims(50, 50, 10);
    for seed in 0..20 {
        assert_eq!(tubal_rank(&gen_low_rank(d, 5, seed).unwrap(), DEFAULT_RANK_TOL).unwrap(), 5);
    }
    let d = dims(9, 6, 4);
    assert_eq!(tubal_rank(&gen_low_rank(d, 6, 1).unwrap(), DEFAULT_RANK_TOL).unwrap(), 6);
}

#[test]
fn low_rank_entry_variance() {
    // each entry sums r * n3 products of independent N(0, 1/n1) factors
    let cube = dims(40, 40, 40);
    let samples: Vec<_> = (0..2).map(|s| gen_low_rank(cube, 4, s).unwrap()).collect();
    let want = 4.0 * 40.0 / (40.0 * 40.0);
    assert!((want - 4.0 / 40.0f64).abs() < 1e-15);
    let got = sample_variance(&samples);
    assert!((got / want - 1.0).abs() <= 0.1, "{got} vs {want}");

    let flat = dims(50, 50, 10);
    let samples: Vec<_> = (0..4).map(|s| gen_low_rank(flat, 5, 100 + s).unwrap()).collect();
    let want = 5.0 * 10.0 / (50.0 * 50.0);
    let got = sample_variance(&samples);
    assert!((got / want - 1.0).abs() <= 0.1, "{got} vs {want}");
}

#[test]
fn uniform_support_and_sign_balance() {
    let d = dims(20, 15, 10);
    assert_eq!(gen_sparse_uniform(d, 0, 3).unwrap().norm_inf(), 0.0);
    assert!(gen_sparse_uniform(d, d.len() + 1, 3).is_err());
    let m = 600;
    for seed in 0..20 {
        let e = gen_sparse_uniform(d, m, seed).unwrap();
        let plus = e.as_slice().iter().filter(|&&v| v == 1.0).count();
        let minus = e.as_slice().iter().filter(|&&v| v == -1.0).count();
        assert_eq!(plus + minus, m);
        assert_eq!(e.count_above(0.0), m);
        assert!((plus as f64 - minus as f64).abs() <= 4.0 * (m as f64).sqrt());
    }
    let all = gen_sparse_uniform(d, d.len(), 9).unwrap();
    assert!(all.as_slice().iter().all(|v| v.abs() == 1.0));
}

#[test]
fn bernoulli_rate() {
    let d = dims(30, 30, 20);
    assert_eq!(gen_sparse_bernoulli(d, 0.0, 1).unwrap().norm_inf(), 0.0);
    assert!(gen_sparse_bernoulli(d, 1.0, 1).unwrap().as_slice().iter().all(|v| v.abs() == 1.0));
    assert!(gen_sparse_bernoulli(d, 1.1, 1).is_err());
    let n = d.len() as f64;
    for (seed, rho) in [(2, 0.05), (3, 0.2), (4, 0.5)] {
        let e = gen_sparse_bernoulli(d, rho, seed).unwrap();
        let nnz = e.count_above(0.0) as f64;
        let sigma = (n * rho * (1.0 - rho)).sqrt();
        assert!((nnz - n * rho).abs() <= 3.0 * sigma, "rho {rho}: {nnz}");
        let plus = e.as_slice().iter().filter(|&&v| v == 1.0).count() as f64;
        assert!((2.0 * plus - nnz).abs() <= 3.0 * nnz.sqrt());
    }
}

#[test]
fn trial_construction_and_reproducibility() {
    let spec = TrialSpec::new(dims(20, 20, 8), 2, SparsityModel::Uniform { m: 300 }, 17);
    let (l, e) = spec.generate().unwrap();
    assert_eq!(spec.generate().unwrap(), (l.clone(), e.clone()));
    assert_eq!(e.count_above(0.0), 300);

    let config = SolverConfig::default();
    let a = run_trial(&spec, &config).unwrap();
    let b = run_trial(&spec, &config).unwrap();
    assert_eq!((a.rank_hat, a.nnz_hat, a.iterations), (b.rank_hat, b.nnz_hat, b.iterations));
    assert_eq!(a.rel_err_l.to_bits(), b.rel_err_l.to_bits());
    assert_eq!(a.rel_err_e.to_bits(), b.rel_err_e.to_bits());
    assert!(a.success && a.converged && a.rank_hat == 2);
    assert_eq!(a.success, a.rel_err_l <= spec.success_tol);

    let empty = TrialSpec::new(dims(6, 6, 3), 0, SparsityModel::Uniform { m: 0 }, 1);
    let out = run_trial(&empty, &config).unwrap();
    assert!(out.success && out.rank_hat == 0 && out.nnz_hat == 0 && out.iterations == 1);

    assert!(TrialSpec::new(dims(4, 4, 2), 5, SparsityModel::Uniform { m: 0 }, 0).validate().is_err());
    assert!(TrialSpec::new(dims(4, 4, 2), 1, SparsityModel::Bernoulli { rho: -0.1 }, 0).validate().is_err());
}

#[test]
fn grid_axes() {
    let g = linspace(0.02, 0.4, 10);
    assert_eq!(g.len(), 10);
    assert_eq!((g[0], g[9]), (0.02, 0.4));
    let d = dims(40, 40, 20);
    assert_eq!(rank_for_fraction(d, 0.02), 1);
    assert_eq!(rank_for_fraction(d, 0.4), 16);
    assert_eq!(rank_for_fraction(d, 0.001), 1);
}

#[test]
fn small_phase_grid_is_deterministic() {
    let d = dims(12, 12, 4);
    let config = SolverConfig::default();
    let r = [0.1, 0.5];
    let rho = [0.02, 0.4];
    let a = phase_grid(d, &r, &rho, 2, 5, &config).unwrap();
    let b = phase_grid(d, &r, &rho, 2, 5, &config).unwrap();
    assert_eq!(a.success_fraction, b.success_fraction);
    assert_eq!(a.success_fraction.len(), 2);
    assert!(a.success_fraction.iter().flatten().all(|v| (0.0..=1.0).contains(v)));
    assert_eq!(a.cell(0, 0), 1.0);
    assert_eq!(a.cell(1, 1), 0.0);
    assert_eq!(a.trials.len(), 8);

    let rows = |g: &trpca_core::synth::PhaseGrid| -> Vec<u8> {
        let pairs: Vec<_> = g.trials.iter().map(|t| (t.spec, t.outcome.clone())).collect();
        let mut out = Vec::new();
        write_trials_csv(&mut out, &pairs, false).unwrap();
        write_grid_matrix_csv(&mut out, g).unwrap();
        out
    };
    assert_eq!(rows(&a), rows(&b));
    assert!(phase_grid(d, &[], &rho, 1, 0, &config).is_err());
}

#[test]
fn trial_csv_layout() {
    let spec = TrialSpec::new(dims(8, 8, 2), 1, SparsityModel::Bernoulli { rho: 0.05 }, 3);
    let out = run_trial(&spec, &SolverConfig::default()).unwrap();
    let mut plain = Vec::new();
    write_trials_csv(&mut plain, &[(spec, out.clone())], false).unwrap();
    let text = String::from_utf8(plain).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n1,n2,n3,rank,sparsity_model,sparsity_param,seed,rank_hat,nnz_hat,rel_err_l,rel_err_e,success,converged,iterations"
    );
    assert!(lines.next().unwrap().starts_with("8,8,2,1,bernoulli,0.05,3,"));
    let mut timed = Vec::new();
    write_trials_csv(&mut timed, &[(spec, out)], true).unwrap();
    assert!(String::from_utf8(timed).unwrap().lines().next().unwrap().ends_with(",wall_time"));
}
