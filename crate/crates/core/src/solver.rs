//! Tensor robust PCA by ADMM.
//!
//! Solves `min ||L||_* + lambda * ||E||_1  s.t.  X = L + E` where `||.||_*` is
//! the tensor nuclear norm. Each iteration:
//!
//! 1. `L <- tsvt(X - E - Y/mu, 1/mu)`
//! 2. `E <- soft_threshold(X - L - Y/mu, lambda/mu)`
//! 3. `Y <- Y + mu * (L + E - X)`
//! 4. `mu <- min(rho * mu, mu_max)`
//!
//! and stops once the changes in `L` and `E` and the constraint violation are
//! all at most `eps` in the max-norm. `L`, `E` and `Y` start at zero.

use std::fmt;
use std::str::FromStr;

use crate::algebra::{skinny_tsvd, tprod, ttranspose, tubal_rank};
use crate::error::{Error, Result};
use crate::prox::{shrink, tsvt};
use crate::tensor::{Tensor3, TensorDims};

/// `1 / sqrt(max(n1, n2) * n3)`.
pub fn default_lambda(dims: TensorDims) -> f64 {
    1.0 / ((dims.n_max() * dims.n3) as f64).sqrt()
}

/// ADMM parameters. `lambda = None` means [`default_lambda`] of the input.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub lambda: Option<f64>,
    pub rho: f64,
    pub mu0: f64,
    pub mu_max: f64,
    pub eps: f64,
    pub max_iter: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            lambda: None,
            rho: 1.1,
            mu0: 1e-3,
            mu_max: 1e10,
            eps: 1e-8,
            max_iter: 500,
        }
    }
}

impl SolverConfig {
    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = Some(lambda);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Argument(format!("{name} must be positive and finite, got {v}")))
            }
        };
        if let Some(l) = self.lambda {
            positive("lambda", l)?;
        }
        positive("mu0", self.mu0)?;
        positive("mu_max", self.mu_max)?;
        positive("eps", self.eps)?;
        if !(self.rho >= 1.0) || !self.rho.is_finite() {
            return Err(Error::Argument(format!("rho must be >= 1, got {}", self.rho)));
        }
        if self.mu0 > self.mu_max {
            return Err(Error::Argument(format!(
                "mu0 {} exceeds mu_max {}",
                self.mu0, self.mu_max
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::Argument("max_iter must be at least 1".into()));
        }
        Ok(())
    }

    pub fn lambda_for(&self, dims: TensorDims) -> f64 {
        self.lambda.unwrap_or_else(|| default_lambda(dims))
    }

    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |e: &dyn fmt::Display| Error::Argument(format!("bad value for {key}: {e}"));
        let real = |v: &str| v.parse::<f64>().map_err(|e| bad(&e));
        match key {
            "lambda" => self.lambda = Some(real(value)?),
            "rho" => self.rho = real(value)?,
            "mu0" => self.mu0 = real(value)?,
            "mu_max" => self.mu_max = real(value)?,
            "eps" => self.eps = real(value)?,
            "max_iter" => self.max_iter = value.parse().map_err(|e| bad(&e))?,
            _ => return Err(Error::Argument(format!("unknown solver setting `{key}`"))),
        }
        Ok(())
    }
}

/// Flat `key = value` text, one setting per line; `#` starts a comment.
impl FromStr for SolverConfig {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut config = SolverConfig::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Format(format!("line {}: expected key = value", n + 1)))?;
            config.set(key.trim(), value.trim())?;
        }
        config.validate()?;
        Ok(config)
    }
}

impl fmt::Display for SolverConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(l) = self.lambda {
            writeln!(f, "lambda = {l:e}")?;
        }
        writeln!(f, "rho = {}", self.rho)?;
        writeln!(f, "mu0 = {:e}", self.mu0)?;
        writeln!(f, "mu_max = {:e}", self.mu_max)?;
        writeln!(f, "eps = {:e}", self.eps)?;
        writeln!(f, "max_iter = {}", self.max_iter)
    }
}

/// Stopping quantities after one iteration, all max-norms.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Residuals {
    pub delta_l: f64,
    pub delta_e: f64,
    pub feasibility: f64,
}

impl Residuals {
    pub fn max(&self) -> f64 {
        self.delta_l.max(self.delta_e).max(self.feasibility)
    }
}

#[derive(Clone, Debug)]
pub struct TrpcaResult {
    pub low_rank: Tensor3,
    pub sparse: Tensor3,
    pub lambda: f64,
    pub iterations: usize,
    pub converged: bool,
    pub residual_history: Vec<Residuals>,
    pub mu_final: f64,
}

impl TrpcaResult {
    pub fn final_residuals(&self) -> Option<Residuals> {
        self.residual_history.last().copied()
    }
}

/// State handed to an observer after every iteration.
pub struct Iterate<'a> {
    pub iteration: usize,
    pub low_rank: &'a Tensor3,
    pub sparse: &'a Tensor3,
    pub dual: &'a Tensor3,
    pub mu: f64,
    pub residuals: Residuals,
}

pub fn solve(x: &Tensor3, config: &SolverConfig) -> Result<TrpcaResult> {
    solve_observed(x, config, |_| {})
}

/// [`solve`], calling `observer` after each iteration with the updated
/// iterates (`mu` is the value used during that iteration).
pub fn solve_observed(
    x: &Tensor3,
    config: &SolverConfig,
    mut observer: impl FnMut(&Iterate<'_>),
) -> Result<TrpcaResult> {
    config.validate()?;
    if let Some(pos) = x.as_slice().iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(pos));
    }
    let dims = x.dims();
    let lambda = config.lambda_for(dims);
    let xs = x.as_slice();
    let n = dims.len();

    let mut l = Tensor3::zeros(dims);
    let mut e = vec![0.0; n];
    let mut y = vec![0.0; n];
    let mut mu = config.mu0;
    let mut history = Vec::new();
    let mut converged = false;
    let mut scratch = vec![0.0; n];

    for iteration in 1..=config.max_iter {
        let inv_mu = 1.0 / mu;
        for p in 0..n {
            scratch[p] = xs[p] - e[p] - y[p] * inv_mu;
        }
        let l_next = tsvt(&Tensor3::from_vec(dims, scratch.clone())?, inv_mu)?;
        let ln = l_next.as_slice();
        let lo = l.as_slice();

        let threshold = lambda * inv_mu;
        let (mut delta_l, mut delta_e, mut feasibility) = (0.0f64, 0.0f64, 0.0f64);
        for p in 0..n {
            let e_next = shrink(xs[p] - ln[p] - y[p] * inv_mu, threshold);
            let gap = ln[p] + e_next - xs[p];
            y[p] += mu * gap;
            delta_l = delta_l.max((ln[p] - lo[p]).abs());
            delta_e = delta_e.max((e_next - e[p]).abs());
            feasibility = feasibility.max(gap.abs());
            e[p] = e_next;
        }
        let residuals = Residuals {
            delta_l,
            delta_e,
            feasibility,
        };
        history.push(residuals);
        l = l_next;
        let used_mu = mu;
        mu = (config.rho * mu).min(config.mu_max);

        let sparse = Tensor3::from_vec(dims, e.clone())?;
        let dual = Tensor3::from_vec(dims, y.clone())?;
        observer(&Iterate {
            iteration,
            low_rank: &l,
            sparse: &sparse,
            dual: &dual,
            mu: used_mu,
            residuals,
        });

        if residuals.max() <= config.eps {
            converged = true;
            break;
        }
    }

    Ok(TrpcaResult {
        low_rank: l,
        sparse: Tensor3::from_vec(dims, e)?,
        lambda,
        iterations: history.len(),
        converged,
        residual_history: history,
        mu_final: mu,
    })
}

/// Smallest incoherence parameters for which each condition holds with
/// equality, computed from the skinny t-SVD at the detected tubal rank.
#[derive(Clone, Debug, PartialEq)]
pub struct IncoherenceReport {
    pub mu_u: f64,
    pub mu_v: f64,
    pub mu_joint: f64,
    pub rank: usize,
}

/// Largest squared row norm over horizontal slices, `max_i ||T(i, :, :)||_F^2`.
/// Equals `max_i ||T^T * e_i||_F^2` for the column basis `e_i`.
fn max_row_energy(t: &Tensor3) -> f64 {
    let d = t.dims();
    (0..d.n1)
        .map(|i| {
            let mut acc = 0.0;
            for k in 0..d.n3 {
                for j in 0..d.n2 {
                    let v = t.as_slice()[d.offset(i, j, k)];
                    acc += v * v;
                }
            }
            acc
        })
        .fold(0.0, f64::max)
}

pub fn incoherence_report(l: &Tensor3, tol: f64) -> Result<IncoherenceReport> {
    let rank = tubal_rank(l, tol)?;
    if rank == 0 || l.norm_inf() == 0.0 {
        return Err(Error::Argument("incoherence of a zero tensor is undefined".into()));
    }
    let d = l.dims();
    let f = skinny_tsvd(l, rank)?;
    let r = rank as f64;
    let n3 = d.n3 as f64;
    let mu_u = d.n1 as f64 * n3 / r * max_row_energy(&f.u);
    let mu_v = d.n2 as f64 * n3 / r * max_row_energy(&f.v);
    let joint = tprod(&f.u, &ttranspose(&f.v))?.norm_inf();
    let mu_joint = (d.n1 * d.n2) as f64 * n3 * n3 / r * joint * joint;
    Ok(IncoherenceReport {
        mu_u,
        mu_v,
        mu_joint,
        rank,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_lambda_values() {
        let d = |a, b, c| TensorDims::new(a, b, c).unwrap();
        assert!((default_lambda(d(100, 100, 100)) - 0.01).abs() < 1e-15);
        assert_eq!(default_lambda(d(30, 50, 1)), 1.0 / 50f64.sqrt());
        assert_eq!(default_lambda(d(192, 168, 32)), 1.0 / (192.0f64 * 32.0).sqrt());
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig::default().validate().is_ok());
        let bad = [
            SolverConfig { rho: 0.9, ..Default::default() },
            SolverConfig { mu0: 1e11, ..Default::default() },
            SolverConfig { eps: 0.0, ..Default::default() },
            SolverConfig { max_iter: 0, ..Default::default() },
            SolverConfig::default().with_lambda(-1.0),
        ];
        for c in bad {
            assert!(c.validate().is_err(), "{c:?}");
        }
    }

    #[test]
    fn config_text_round_trip() {
        let c: SolverConfig = "# tuned\nlambda = 0.05\nrho=1.2\n\nmax_iter = 40 # cap\n".parse().unwrap();
        assert_eq!(c.lambda, Some(0.05));
        assert_eq!(c.rho, 1.2);
        assert_eq!(c.max_iter, 40);
        assert_eq!(c.mu0, 1e-3);
        let again: SolverConfig = c.to_string().parse().unwrap();
        assert_eq!(again, c);
        assert!("gamma = 1".parse::<SolverConfig>().is_err());
        assert!("rho 1.1".parse::<SolverConfig>().is_err());
        assert!("rho = abc".parse::<SolverConfig>().is_err());
    }

    #[test]
    fn zero_input_converges_immediately() {
        let x = Tensor3::zeros(TensorDims::new(3, 4, 2).unwrap());
        let out = solve(&x, &SolverConfig::default()).unwrap();
        assert!(out.converged);
        assert_eq!(out.iterations, 1);
        assert_eq!(out.low_rank.norm_inf(), 0.0);
        assert_eq!(out.sparse.norm_inf(), 0.0);
    }

    #[test]
    fn iteration_cap_is_not_an_error() {
        let x = Tensor3::from_fn(TensorDims::new(4, 4, 2).unwrap(), |i, j, k| (i * j + k) as f64).unwrap();
        let config = SolverConfig {
            max_iter: 3,
            ..Default::default()
        };
        let out = solve(&x, &config).unwrap();
        assert!(!out.converged);
        assert_eq!(out.iterations, 3);
        assert!((out.mu_final - 1e-3 * 1.1f64.powi(3)).abs() < 1e-15);
    }

    #[test]
    fn zero_tensor_has_no_incoherence() {
        let z = Tensor3::zeros(TensorDims::new(2, 2, 2).unwrap());
        assert!(incoherence_report(&z, 1e-8).is_err());
    }
}
