//! Synthetic low-rank plus sparse problems and the recovery experiments built
//! on them.
//!
//! Randomness comes from ChaCha8 streams seeded through SplitMix64, with
//! Gaussian draws from `rand_distr`'s ziggurat sampler, so results are
//! reproducible across platforms for a given seed.

use std::io::Write;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::algebra::{tprod, tubal_rank, DEFAULT_RANK_TOL};
use crate::error::{Error, Result};
use crate::parallel::par_map;
use crate::solver::{solve, SolverConfig};
use crate::tensor::{Tensor3, TensorDims};

/// Relative threshold (against `||E_hat||_inf`) for counting recovered
/// sparse entries.
pub const NNZ_REL_THRESHOLD: f64 = 1e-8;

/// Default success threshold on `||L_hat - L0||_F / ||L0||_F`.
pub const DEFAULT_SUCCESS_TOL: f64 = 1e-3;

/// SplitMix64 finalizer applied over `base` and each part in turn.
pub fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    parts.iter().fold(mix(base), |acc, &p| mix(acc ^ mix(p)))
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_tensor(dims: TensorDims, std_dev: f64, rng: &mut ChaCha8Rng) -> Tensor3 {
    let normal = Normal::new(0.0, std_dev).expect("positive standard deviation");
    let data = (0..dims.len()).map(|_| normal.sample(rng)).collect();
    Tensor3::from_vec(dims, data).expect("gaussian samples are finite")
}

/// `P * Q` with `P: n1 x r x n3` and `Q: r x n2 x n3` filled with i.i.d.
/// `N(0, 1/n1)` entries. `r = 0` gives the zero tensor.
pub fn gen_low_rank(dims: TensorDims, r: usize, seed: u64) -> Result<Tensor3> {
    if r > dims.n_min() {
        return Err(Error::Argument(format!(
            "rank {r} exceeds min(n1, n2) = {}",
            dims.n_min()
        )));
    }
    if r == 0 {
        return Ok(Tensor3::zeros(dims));
    }
    let mut rng = rng_from_seed(seed);
    let std_dev = 1.0 / (dims.n1 as f64).sqrt();
    let p = gaussian_tensor(TensorDims::new(dims.n1, r, dims.n3)?, std_dev, &mut rng);
    let q = gaussian_tensor(TensorDims::new(r, dims.n2, dims.n3)?, std_dev, &mut rng);
    tprod(&p, &q)
}

/// Exactly `m` entries of value +-1 (equiprobable) on a uniformly random
/// support.
pub fn gen_sparse_uniform(dims: TensorDims, m: usize, seed: u64) -> Result<Tensor3> {
    let total = dims.len();
    if m > total {
        return Err(Error::Argument(format!("{m} nonzeros requested, tensor has {total} entries")));
    }
    let mut rng = rng_from_seed(seed);
    let mut data = vec![0.0; total];
    let support = index::sample(&mut rng, total, m);
    for pos in support.iter() {
        data[pos] = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    }
    Tensor3::from_vec(dims, data)
}

/// Each entry independently +1 and -1 with probability `rho_s / 2` each,
/// 0 otherwise.
pub fn gen_sparse_bernoulli(dims: TensorDims, rho_s: f64, seed: u64) -> Result<Tensor3> {
    if !(0.0..=1.0).contains(&rho_s) {
        return Err(Error::Argument(format!("sparsity {rho_s} outside [0, 1]")));
    }
    let mut rng = rng_from_seed(seed);
    let half = rho_s / 2.0;
    let data = (0..dims.len())
        .map(|_| {
            let u: f64 = rng.random();
            if u < half {
                1.0
            } else if u < rho_s {
                -1.0
            } else {
                0.0
            }
        })
        .collect();
    Tensor3::from_vec(dims, data)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SparsityModel {
    /// Exactly `m` nonzeros on a uniform support.
    Uniform { m: usize },
    /// Bernoulli support with rate `rho`.
    Bernoulli { rho: f64 },
}

impl SparsityModel {
    fn generate(&self, dims: TensorDims, seed: u64) -> Result<Tensor3> {
        match *self {
            SparsityModel::Uniform { m } => gen_sparse_uniform(dims, m, seed),
            SparsityModel::Bernoulli { rho } => gen_sparse_bernoulli(dims, rho, seed),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            SparsityModel::Uniform { .. } => "uniform",
            SparsityModel::Bernoulli { .. } => "bernoulli",
        }
    }

    /// `m` for the uniform model, `rho` for the Bernoulli model.
    pub fn parameter(&self) -> f64 {
        match *self {
            SparsityModel::Uniform { m } => m as f64,
            SparsityModel::Bernoulli { rho } => rho,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrialSpec {
    pub dims: TensorDims,
    pub rank: usize,
    pub sparsity: SparsityModel,
    pub seed: u64,
    pub success_tol: f64,
}

impl TrialSpec {
    pub fn new(dims: TensorDims, rank: usize, sparsity: SparsityModel, seed: u64) -> Self {
        Self {
            dims,
            rank,
            sparsity,
            seed,
            success_tol: DEFAULT_SUCCESS_TOL,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.rank > self.dims.n_min() {
            return Err(Error::Argument(format!("rank {} exceeds min(n1, n2)", self.rank)));
        }
        match self.sparsity {
            SparsityModel::Uniform { m } if m > self.dims.len() => {
                Err(Error::Argument(format!("m = {m} exceeds the number of entries")))
            }
            SparsityModel::Bernoulli { rho } if !(0.0..=1.0).contains(&rho) => {
                Err(Error::Argument(format!("rho = {rho} outside [0, 1]")))
            }
            _ if !(self.success_tol > 0.0) => Err(Error::Argument("success_tol must be positive".into())),
            _ => Ok(()),
        }
    }

    /// The ground truth `(L0, E0)`.
    pub fn generate(&self) -> Result<(Tensor3, Tensor3)> {
        self.validate()?;
        let low = gen_low_rank(self.dims, self.rank, derive_seed(self.seed, &[0]))?;
        let sparse = self.sparsity.generate(self.dims, derive_seed(self.seed, &[1]))?;
        Ok((low, sparse))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialOutcome {
    pub rank_hat: usize,
    pub nnz_hat: usize,
    pub rel_err_l: f64,
    pub rel_err_e: f64,
    pub success: bool,
    pub converged: bool,
    pub iterations: usize,
    pub wall_time: f64,
}

/// `||est - truth||_F / ||truth||_F`, or the absolute error when `truth = 0`.
fn recovery_error(est: &Tensor3, truth: &Tensor3) -> Result<f64> {
    est.relative_error(truth)
}

/// Wall-clock seconds for `f`. Bare wasm has no clock, so 0 there.
#[cfg(not(all(target_arch = "wasm32", target_os = "unknown")))]
fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let started = std::time::Instant::now();
    let value = f();
    (value, started.elapsed().as_secs_f64())
}

#[cfg(all(target_arch = "wasm32", target_os = "unknown"))]
fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    (f(), 0.0)
}

pub fn run_trial(spec: &TrialSpec, config: &SolverConfig) -> Result<TrialOutcome> {
    let (outcome, wall_time) = timed(|| untimed_trial(spec, config));
    outcome.map(|o| TrialOutcome { wall_time, ..o })
}

fn untimed_trial(spec: &TrialSpec, config: &SolverConfig) -> Result<TrialOutcome> {
    let (low, sparse) = spec.generate()?;
    let x = &low + &sparse;
    let out = solve(&x, config)?;
    let rel_err_l = recovery_error(&out.low_rank, &low)?;
    let rel_err_e = recovery_error(&out.sparse, &sparse)?;
    let e_max = out.sparse.norm_inf();
    Ok(TrialOutcome {
        rank_hat: tubal_rank(&out.low_rank, DEFAULT_RANK_TOL)?,
        nnz_hat: if e_max == 0.0 { 0 } else { out.sparse.count_above(NNZ_REL_THRESHOLD * e_max) },
        rel_err_l,
        rel_err_e,
        success: rel_err_l <= spec.success_tol,
        converged: out.converged,
        iterations: out.iterations,
        wall_time: 0.0,
    })
}

/// One trial of a phase-transition sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct GridTrial {
    pub rho_index: usize,
    pub r_index: usize,
    pub trial: usize,
    pub spec: TrialSpec,
    pub outcome: TrialOutcome,
}

/// Success fractions over a grid of rank fractions and Bernoulli rates.
/// `success_fraction[row][col]` holds `rho_values[row]` and `r_fractions[col]`.
#[derive(Clone, Debug)]
pub struct PhaseGrid {
    pub dims: TensorDims,
    pub r_fractions: Vec<f64>,
    pub rho_values: Vec<f64>,
    pub trials_per_cell: usize,
    pub success_fraction: Vec<Vec<f64>>,
    pub trials: Vec<GridTrial>,
}

impl PhaseGrid {
    pub fn cell(&self, rho_index: usize, r_index: usize) -> f64 {
        self.success_fraction[rho_index][r_index]
    }

    /// Largest number of increases along any row (growing rank) or column
    /// (growing sparsity). A monotone grid has 0.
    pub fn max_monotonicity_violations(&self) -> usize {
        let rows = self.success_fraction.len();
        let cols = self.r_fractions.len();
        let count = |seq: Vec<f64>| seq.windows(2).filter(|w| w[1] > w[0] + 1e-12).count();
        let by_row = (0..rows).map(|i| count(self.success_fraction[i].clone()));
        let by_col = (0..cols).map(|j| count((0..rows).map(|i| self.success_fraction[i][j]).collect()));
        by_row.chain(by_col).max().unwrap_or(0)
    }
}

/// Tubal rank used for a rank fraction: `round(frac * min(n1, n2))`, at least 1.
pub fn rank_for_fraction(dims: TensorDims, frac: f64) -> usize {
    ((frac * dims.n_min() as f64).round() as usize).clamp(1, dims.n_min())
}

/// `count` evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count)
            .map(|i| {
                if i == count - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (count - 1) as f64
                }
            })
            .collect(),
    }
}

/// Runs `trials` Bernoulli-model instances per `(rho, r/n)` cell. Trial
/// seeds derive from `(base_seed, cell, trial)`.
pub fn phase_grid(
    dims: TensorDims,
    r_fractions: &[f64],
    rho_values: &[f64],
    trials: usize,
    base_seed: u64,
    config: &SolverConfig,
) -> Result<PhaseGrid> {
    if r_fractions.is_empty() || rho_values.is_empty() || trials == 0 {
        return Err(Error::Argument("phase grid needs non-empty axes and at least one trial".into()));
    }
    let cols = r_fractions.len();
    let jobs = rho_values.len() * cols * trials;
    let results = par_map(jobs, |job| -> Result<GridTrial> {
        let trial = job % trials;
        let cell = job / trials;
        let (rho_index, r_index) = (cell / cols, cell % cols);
        let spec = TrialSpec::new(
            dims,
            rank_for_fraction(dims, r_fractions[r_index]),
            SparsityModel::Bernoulli {
                rho: rho_values[rho_index],
            },
            derive_seed(base_seed, &[cell as u64, trial as u64]),
        );
        let outcome = run_trial(&spec, config)?;
        Ok(GridTrial {
            rho_index,
            r_index,
            trial,
            spec,
            outcome,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let mut success_fraction = vec![vec![0.0; cols]; rho_values.len()];
    for t in &results {
        if t.outcome.success {
            success_fraction[t.rho_index][t.r_index] += 1.0 / trials as f64;
        }
    }
    Ok(PhaseGrid {
        dims,
        r_fractions: r_fractions.to_vec(),
        rho_values: rho_values.to_vec(),
        trials_per_cell: trials,
        success_fraction,
        trials: results,
    })
}

const TRIAL_HEADER: [&str; 14] = [
    "n1", "n2", "n3", "rank", "sparsity_model", "sparsity_param", "seed", "rank_hat", "nnz_hat",
    "rel_err_l", "rel_err_e", "success", "converged", "iterations",
];

/// Writes one CSV row per trial. Wall time is appended only when
/// `with_timing` is set, since it is the one non-reproducible column.
pub fn write_trials_csv<W: Write>(
    w: W,
    rows: &[(TrialSpec, TrialOutcome)],
    with_timing: bool,
) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let mut header: Vec<&str> = TRIAL_HEADER.to_vec();
    if with_timing {
        header.push("wall_time");
    }
    out.write_record(&header).map_err(csv_err)?;
    for (spec, o) in rows {
        let mut rec = vec![
            spec.dims.n1.to_string(),
            spec.dims.n2.to_string(),
            spec.dims.n3.to_string(),
            spec.rank.to_string(),
            spec.sparsity.label().to_string(),
            spec.sparsity.parameter().to_string(),
            spec.seed.to_string(),
            o.rank_hat.to_string(),
            o.nnz_hat.to_string(),
            format!("{:e}", o.rel_err_l),
            format!("{:e}", o.rel_err_e),
            (o.success as u8).to_string(),
            (o.converged as u8).to_string(),
            o.iterations.to_string(),
        ];
        if with_timing {
            rec.push(format!("{:.3}", o.wall_time));
        }
        out.write_record(&rec).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

/// Dense success matrix: header row of r/n values, then one row per rho.
pub fn write_grid_matrix_csv<W: Write>(w: W, grid: &PhaseGrid) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec!["rho_s\\r_over_n".to_string()];
    header.extend(grid.r_fractions.iter().map(|f| f.to_string()));
    out.write_record(&header).map_err(csv_err)?;
    for (rho, row) in grid.rho_values.iter().zip(&grid.success_fraction) {
        let mut rec = vec![rho.to_string()];
        rec.extend(row.iter().map(|v| v.to_string()));
        out.write_record(&rec).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Format(format!("csv: {e}"))
}
