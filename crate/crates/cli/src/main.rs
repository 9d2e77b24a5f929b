use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod failure;

use failure::Failure;

/// Tensor robust PCA: t-SVD inspection, solving, synthetic experiments and
/// image denoising.
///
/// Exit status: 0 on success, 2 for bad input, 3 when the solver stops
/// without converging, 1 for anything else. `TRPCA_THREADS` sets the worker
/// thread count.
#[derive(Parser, Debug)]
#[command(name = "trpca", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print ranks, norms and incoherence of a tensor file
    Tsvd {
        input: PathBuf,
        /// Relative singular value cutoff for the rank counts
        #[arg(long, default_value_t = trpca_core::DEFAULT_RANK_TOL)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Split a tensor file into low-rank and sparse parts
    Solve {
        input: PathBuf,
        /// Sparsity weight; defaults to 1/sqrt(max(n1, n2) * n3)
        #[arg(long)]
        lambda: Option<f64>,
        /// Solver settings file with `key = value` lines
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long = "out-L", visible_alias = "out-l")]
        out_l: Option<PathBuf>,
        #[arg(long = "out-E", visible_alias = "out-e")]
        out_e: Option<PathBuf>,
    },
    /// Write a synthetic low-rank plus sparse tensor
    Gen {
        #[arg(long)]
        n1: usize,
        #[arg(long)]
        n2: usize,
        #[arg(long)]
        n3: usize,
        #[arg(long)]
        rank: usize,
        /// Number of +-1 corruptions on a uniform support
        #[arg(long, conflicts_with = "rho")]
        m: Option<usize>,
        /// Bernoulli corruption rate
        #[arg(long)]
        rho: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long = "out-L", visible_alias = "out-l")]
        out_l: Option<PathBuf>,
        #[arg(long = "out-E", visible_alias = "out-e")]
        out_e: Option<PathBuf>,
    },
    /// Exact recovery trials on random n x n x n3 problems, one CSV row per seed
    Table1 {
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        n3: usize,
        /// Tubal rank as a fraction of n
        #[arg(long, default_value_t = 0.1)]
        r_frac: f64,
        /// Corrupted entries as a fraction of n * n * n3
        #[arg(long, default_value_t = 0.1)]
        m_frac: f64,
        /// Number of trials
        #[arg(long, default_value_t = 1)]
        seeds: usize,
        /// Base seed; trial seeds derive from it
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV destination (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Append a wall_time column (not reproducible)
        #[arg(long)]
        timing: bool,
    },
    /// Success fraction over a grid of rank fractions and corruption rates
    Phase {
        #[arg(long, default_value_t = 40)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        n3: usize,
        /// Points per axis, spread over [0.02, 0.4]
        #[arg(long, default_value_t = 10)]
        grid: usize,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Success matrix CSV (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Per-trial CSV
        #[arg(long)]
        trials_out: Option<PathBuf>,
    },
    /// Corrupt an image (PPM/PGM, or a directory of PGM frames) and recover it
    Denoise {
        input: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        fraction: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also run matrix RPCA on each channel or frame
        #[arg(long)]
        baseline: bool,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// CSV file the report row is appended to
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("TRPCA_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .map_err(|_| Failure::input(format!("TRPCA_THREADS must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::internal(format!("thread pool: {e}")))
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    configure_threads()?;
    match cli.command {
        Command::Tsvd { input, tol, json } => commands::tsvd(&input, tol, json),
        Command::Solve {
            input,
            lambda,
            config,
            out_l,
            out_e,
        } => commands::solve(&input, lambda, config.as_deref(), out_l.as_deref(), out_e.as_deref()),
        Command::Gen {
            n1,
            n2,
            n3,
            rank,
            m,
            rho,
            seed,
            out,
            out_l,
            out_e,
        } => commands::gen(
            (n1, n2, n3),
            rank,
            m,
            rho,
            seed,
            &out,
            out_l.as_deref(),
            out_e.as_deref(),
        ),
        Command::Table1 {
            n,
            n3,
            r_frac,
            m_frac,
            seeds,
            seed,
            out,
            timing,
        } => commands::table1(n, n3, r_frac, m_frac, seeds, seed, out.as_deref(), timing),
        Command::Phase {
            n,
            n3,
            grid,
            trials,
            seed,
            out,
            trials_out,
        } => commands::phase(n, n3, grid, trials, seed, out.as_deref(), trials_out.as_deref()),
        Command::Denoise {
            input,
            fraction,
            seed,
            baseline,
            out_dir,
            report,
        } => commands::denoise(&input, fraction, seed, baseline, &out_dir, report.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("trpca: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
