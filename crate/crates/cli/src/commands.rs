use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use serde::Serialize;
use trpca_core::imaging::{denoise as run_denoise, tensor_to_stack, ImageStack, StackKind};
use trpca_core::io::{load_tensor, save_tensor};
use trpca_core::netpbm::{load_pnm, save_pnm, PnmImage};
use trpca_core::synth::{
    derive_seed, linspace, phase_grid, run_trial, write_grid_matrix_csv, write_trials_csv, SparsityModel,
    TrialSpec, NNZ_REL_THRESHOLD,
};
use trpca_core::{
    average_rank, incoherence_report, multi_rank, spectral_norm, tnn, tubal_rank, SolverConfig, Tensor3,
    TensorDims, DEFAULT_RANK_TOL,
};

use crate::failure::{Failure, EXIT_NOT_CONVERGED};

const PHASE_LO: f64 = 0.02;
const PHASE_HI: f64 = 0.4;

fn header(command: &str, seed: u64) {
    eprintln!("# trpca {command} seed={seed}");
}

fn load(path: &Path) -> Result<Tensor3, Failure> {
    load_tensor(path).map_err(|e| Failure::from(e).context(path.display()))
}

fn save(path: &Path, t: &Tensor3) -> Result<(), Failure> {
    save_tensor(path, t).map_err(|e| Failure::from(e).context(path.display()))
}

fn nnz(e: &Tensor3) -> usize {
    let max = e.norm_inf();
    if max == 0.0 {
        0
    } else {
        e.count_above(NNZ_REL_THRESHOLD * max)
    }
}

/// Opens `path`, or stdout when it is `None`.
fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(io::BufWriter::new(
            fs::File::create(p).map_err(|e| Failure::from(e).context(p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

#[derive(Serialize)]
struct Incoherence {
    mu_u: f64,
    mu_v: f64,
    mu_joint: f64,
}

#[derive(Serialize)]
struct TsvdReport {
    dims: [usize; 3],
    tol: f64,
    multi_rank: Vec<usize>,
    tubal_rank: usize,
    average_rank: f64,
    tnn: f64,
    spectral_norm: f64,
    incoherence: Option<Incoherence>,
}

pub fn tsvd(input: &Path, tol: f64, json: bool) -> Result<ExitCode, Failure> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Failure::input(format!("--tol must lie in (0, 1), got {tol}")));
    }
    let a = load(input)?;
    let d = a.dims();
    let rank = tubal_rank(&a, tol)?;
    let incoherence = if rank > 0 {
        let r = incoherence_report(&a, tol)?;
        Some(Incoherence {
            mu_u: r.mu_u,
            mu_v: r.mu_v,
            mu_joint: r.mu_joint,
        })
    } else {
        None
    };
    let report = TsvdReport {
        dims: [d.n1, d.n2, d.n3],
        tol,
        multi_rank: multi_rank(&a, tol)?,
        tubal_rank: rank,
        average_rank: average_rank(&a, tol)?,
        tnn: tnn(&a)?,
        spectral_norm: spectral_norm(&a)?,
        incoherence,
    };
    if json {
        println!("{}", serde_json::to_string_pretty(&report)?);
        return Ok(ExitCode::SUCCESS);
    }
    println!("dims           {d}");
    println!("multi_rank     {:?}", report.multi_rank);
    println!("tubal_rank     {}", report.tubal_rank);
    println!("average_rank   {}", report.average_rank);
    println!("tnn            {}", report.tnn);
    println!("spectral_norm  {}", report.spectral_norm);
    match &report.incoherence {
        Some(i) => println!("incoherence    mu_u={} mu_v={} mu_joint={}", i.mu_u, i.mu_v, i.mu_joint),
        None => println!("incoherence    undefined (zero tensor)"),
    }
    Ok(ExitCode::SUCCESS)
}

pub fn solve(
    input: &Path,
    lambda: Option<f64>,
    config: Option<&Path>,
    out_l: Option<&Path>,
    out_e: Option<&Path>,
) -> Result<ExitCode, Failure> {
    let mut cfg = match config {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| Failure::from(e).context(p.display()))?;
            text.parse::<SolverConfig>().map_err(|e| Failure::from(e).context(p.display()))?
        }
        None => SolverConfig::default(),
    };
    if let Some(l) = lambda {
        cfg.lambda = Some(l);
    }
    cfg.validate()?;
    let x = load(input)?;
    let out = trpca_core::solve(&x, &cfg)?;
    if let Some(p) = out_l {
        save(p, &out.low_rank)?;
    }
    if let Some(p) = out_e {
        save(p, &out.sparse)?;
    }
    let res = out.final_residuals().unwrap_or_default();
    println!("dims         {}", x.dims());
    println!("lambda       {:e}", out.lambda);
    println!("iterations   {}", out.iterations);
    println!("converged    {}", out.converged);
    println!("mu_final     {:e}", out.mu_final);
    println!("delta_l      {:e}", res.delta_l);
    println!("delta_e      {:e}", res.delta_e);
    println!("feasibility  {:e}", res.feasibility);
    println!("tubal_rank   {}", tubal_rank(&out.low_rank, DEFAULT_RANK_TOL)?);
    println!("nnz_e        {}", nnz(&out.sparse));
    if out.converged {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("trpca: stopped at max_iter = {} without converging", cfg.max_iter);
        Ok(ExitCode::from(EXIT_NOT_CONVERGED))
    }
}

#[allow(clippy::too_many_arguments)]
pub fn gen(
    (n1, n2, n3): (usize, usize, usize),
    rank: usize,
    m: Option<usize>,
    rho: Option<f64>,
    seed: u64,
    out: &Path,
    out_l: Option<&Path>,
    out_e: Option<&Path>,
) -> Result<ExitCode, Failure> {
    header("gen", seed);
    let sparsity = match (m, rho) {
        (_, Some(rho)) => SparsityModel::Bernoulli { rho },
        (m, None) => SparsityModel::Uniform { m: m.unwrap_or(0) },
    };
    let spec = TrialSpec::new(TensorDims::new(n1, n2, n3)?, rank, sparsity, seed);
    let (l, e) = spec.generate()?;
    save(out, &(&l + &e))?;
    if let Some(p) = out_l {
        save(p, &l)?;
    }
    if let Some(p) = out_e {
        save(p, &e)?;
    }
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
pub fn table1(
    n: usize,
    n3: usize,
    r_frac: f64,
    m_frac: f64,
    seeds: usize,
    seed: u64,
    out: Option<&Path>,
    timing: bool,
) -> Result<ExitCode, Failure> {
    header("table1", seed);
    if !(0.0..=1.0).contains(&r_frac) || !(0.0..=1.0).contains(&m_frac) {
        return Err(Failure::input("--r-frac and --m-frac must lie in [0, 1]"));
    }
    if seeds == 0 {
        return Err(Failure::input("--seeds must be at least 1"));
    }
    let dims = TensorDims::new(n, n, n3)?;
    let rank = (r_frac * n as f64).round() as usize;
    let m = (m_frac * dims.len() as f64).round() as usize;
    let config = SolverConfig::default();
    let mut rows = Vec::with_capacity(seeds);
    for s in 0..seeds {
        let spec = TrialSpec::new(dims, rank, SparsityModel::Uniform { m }, derive_seed(seed, &[s as u64]));
        let outcome = run_trial(&spec, &config)?;
        eprintln!(
            "# trial {s}: rank_hat={} rel_err_l={:e} rel_err_e={:e} iterations={}",
            outcome.rank_hat, outcome.rel_err_l, outcome.rel_err_e, outcome.iterations
        );
        rows.push((spec, outcome));
    }
    write_trials_csv(sink(out)?, &rows, timing)?;
    Ok(ExitCode::SUCCESS)
}

pub fn phase(
    n: usize,
    n3: usize,
    grid: usize,
    trials: usize,
    seed: u64,
    out: Option<&Path>,
    trials_out: Option<&Path>,
) -> Result<ExitCode, Failure> {
    header("phase", seed);
    if grid == 0 {
        return Err(Failure::input("--grid must be at least 1"));
    }
    let axis = linspace(PHASE_LO, PHASE_HI, grid);
    let g = phase_grid(TensorDims::new(n, n, n3)?, &axis, &axis, trials, seed, &SolverConfig::default())?;
    write_grid_matrix_csv(sink(out)?, &g)?;
    if let Some(p) = trials_out {
        let rows: Vec<_> = g.trials.iter().map(|t| (t.spec, t.outcome.clone())).collect();
        write_trials_csv(sink(Some(p))?, &rows, false)?;
    }
    Ok(ExitCode::SUCCESS)
}

/// A color or single grayscale image, or every `.pgm` in a directory taken
/// in name order as the frames of one stack.
fn load_stack(input: &Path) -> Result<ImageStack, Failure> {
    if input.is_dir() {
        let mut paths: Vec<PathBuf> = fs::read_dir(input)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x.eq_ignore_ascii_case("pgm")))
            .collect();
        paths.sort();
        if paths.is_empty() {
            return Err(Failure::input(format!("{}: no .pgm files", input.display())));
        }
        let images = paths
            .iter()
            .map(|p| load_pnm(p).map_err(|e| Failure::from(e).context(p.display())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ImageStack::from_gray_images(&images)?)
    } else {
        let img = load_pnm(input).map_err(|e| Failure::from(e).context(input.display()))?;
        Ok(ImageStack::from_pnm(&img)?)
    }
}

/// Writes `stack` as `{stem}_{label}.ppm` for color, `{stem}_{label}.pgm` for
/// one gray frame and `{stem}_{label}_{k:03}.pgm` per frame otherwise.
fn write_stack(dir: &Path, stem: &str, label: &str, images: &[PnmImage], color: bool) -> Result<(), Failure> {
    for (k, img) in images.iter().enumerate() {
        let name = match (color, images.len()) {
            (true, _) => format!("{stem}_{label}.ppm"),
            (false, 1) => format!("{stem}_{label}.pgm"),
            _ => format!("{stem}_{label}_{k:03}.pgm"),
        };
        let path = dir.join(name);
        save_pnm(&path, img).map_err(|e| Failure::from(e).context(path.display()))?;
    }
    Ok(())
}

const REPORT_HEADER: [&str; 9] = [
    "file",
    "frames",
    "fraction",
    "seed",
    "psnr_trpca",
    "psnr_baseline",
    "iterations",
    "converged",
    "union_fraction",
];

pub fn denoise(
    input: &Path,
    fraction: f64,
    seed: u64,
    baseline: bool,
    out_dir: &Path,
    report: Option<&Path>,
) -> Result<ExitCode, Failure> {
    header("denoise", seed);
    let stack = load_stack(input)?;
    fs::create_dir_all(out_dir).map_err(|e| Failure::from(e).context(out_dir.display()))?;
    let out = run_denoise(&stack, fraction, seed, &SolverConfig::default(), baseline)?;

    let stem = input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "image".into());
    let color = stack.kind == StackKind::Color;
    let images = |t: &Tensor3| -> Result<Vec<PnmImage>, Failure> { Ok(tensor_to_stack(t, stack.kind)?.to_pnms()) };
    write_stack(out_dir, &stem, "corrupted", &images(&out.corrupted)?, color)?;
    write_stack(out_dir, &stem, "lowrank", &images(&out.low_rank)?, color)?;
    write_stack(out_dir, &stem, "sparse", &images(&out.sparse.map(f64::abs))?, color)?;
    if let Some(b) = &out.baseline {
        write_stack(out_dir, &stem, "baseline", &images(b)?, color)?;
    }
    let masks: Vec<PnmImage> = if color {
        vec![out.mask.to_pgm(None)]
    } else {
        (0..stack.frames.len()).map(|k| out.mask.to_pgm(Some(k))).collect()
    };
    write_stack(out_dir, &stem, "mask", &masks, false)?;

    let r = &out.report;
    let row = [
        input.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
        stack.frames.len().to_string(),
        fraction.to_string(),
        seed.to_string(),
        r.psnr_trpca.to_string(),
        r.psnr_baseline.map(|p| p.to_string()).unwrap_or_default(),
        r.solver_iterations.to_string(),
        (r.converged as u8).to_string(),
        format!("{:.6}", out.mask.union_fraction()),
    ];
    let mut stdout = csv::Writer::from_writer(io::stdout().lock());
    stdout.write_record(REPORT_HEADER)?;
    stdout.write_record(&row)?;
    stdout.flush()?;
    if let Some(p) = report {
        let fresh = fs::metadata(p).map(|m| m.len() == 0).unwrap_or(true);
        let file = fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(p)
            .map_err(|e| Failure::from(e).context(p.display()))?;
        let mut w = csv::Writer::from_writer(file);
        if fresh {
            w.write_record(REPORT_HEADER)?;
        }
        w.write_record(&row)?;
        w.flush()?;
    }
    Ok(ExitCode::SUCCESS)
}
