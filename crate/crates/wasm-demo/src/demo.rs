use trpca_core::algebra::spectral_singular_values;
use trpca_core::imaging::{denoise, psnr, ImageStack, StackKind};
use trpca_core::synth::{derive_seed, gen_low_rank, rank_for_fraction, run_trial, SparsityModel, TrialSpec, TrialOutcome};
use trpca_core::{tnn, tsvt, tubal_rank, Error, Result, SolverConfig, Tensor3, TensorDims, DEFAULT_RANK_TOL};

const MAX_SIZE: usize = 128;

/// Overlapping colored rectangles on a diagonal gradient. Each channel is a
/// sum of a few outer products, so the image is close to low rank.
pub fn synthetic_rgb(size: usize) -> Result<ImageStack> {
    let rects: [(f64, f64, f64, f64, [f64; 3]); 4] = [
        (0.10, 0.55, 0.15, 0.70, [0.85, 0.25, 0.20]),
        (0.40, 0.90, 0.35, 0.60, [0.15, 0.55, 0.85]),
        (0.65, 0.80, 0.05, 0.95, [0.95, 0.80, 0.15]),
        (0.20, 0.35, 0.75, 0.90, [0.30, 0.75, 0.35]),
    ];
    let s = size as f64;
    let frames = (0..3)
        .map(|c| {
            (0..size * size)
                .map(|p| {
                    let (y, x) = ((p / size) as f64 / s, (p % size) as f64 / s);
                    let mut v = 0.2 + 0.25 * y + 0.15 * x * (c as f64 / 2.0);
                    for &(y0, y1, x0, x1, color) in &rects {
                        if (y0..y1).contains(&y) && (x0..x1).contains(&x) {
                            v = 0.5 * v + 0.5 * color[c];
                        }
                    }
                    (v.clamp(0.0, 1.0) * 255.0).round() as u8
                })
                .collect()
        })
        .collect();
    ImageStack::new(size, size, StackKind::Color, frames)
}

/// `h x w x 3` tensor in `[0, 1]` to RGBA bytes.
pub fn rgba(t: &Tensor3) -> Vec<u8> {
    let d = t.dims();
    let byte = |v: f64| (v.clamp(0.0, 1.0) * 255.0).round() as u8;
    let mut out = Vec::with_capacity(4 * d.n1 * d.n2);
    for i in 0..d.n1 {
        for j in 0..d.n2 {
            for k in 0..3 {
                out.push(byte(t[(i, j, k.min(d.n3 - 1))]));
            }
            out.push(255);
        }
    }
    out
}

pub struct Denoised {
    pub size: usize,
    pub clean: Vec<u8>,
    pub corrupted: Vec<u8>,
    pub recovered: Vec<u8>,
    pub sparse: Vec<u8>,
    pub baseline: Vec<u8>,
    pub psnr_corrupted: f64,
    pub psnr_trpca: f64,
    pub psnr_baseline: f64,
    pub iterations: usize,
}

pub fn denoise_synthetic(size: usize, fraction: f64, seed: u64) -> Result<Denoised> {
    if !(8..=MAX_SIZE).contains(&size) {
        return Err(Error::Argument(format!("size must lie in 8..={MAX_SIZE}")));
    }
    let image = synthetic_rgb(size)?;
    let out = denoise(&image, fraction, seed, &SolverConfig::default(), true)?;
    let baseline = out.baseline.as_ref().expect("baseline requested");
    Ok(Denoised {
        size,
        clean: rgba(&out.clean),
        corrupted: rgba(&out.corrupted),
        recovered: rgba(&out.low_rank),
        sparse: rgba(&out.sparse.map(f64::abs)),
        baseline: rgba(baseline),
        psnr_corrupted: psnr(&out.clean, &out.corrupted, 1.0)?.db(),
        psnr_trpca: out.report.psnr_trpca.db(),
        psnr_baseline: out.report.psnr_baseline.expect("baseline requested").db(),
        iterations: out.report.solver_iterations,
    })
}

pub struct Spectrum {
    pub before: Vec<Vec<f64>>,
    pub after: Vec<Vec<f64>>,
    pub tnn_before: f64,
    pub tnn_after: f64,
    pub rank_before: usize,
    pub rank_after: usize,
}

/// A rank-`rank` tensor plus `noise` times a full-rank one, thresholded at
/// `tau`.
pub fn tsvt_spectrum(n: usize, n3: usize, rank: usize, noise: f64, tau: f64, seed: u64) -> Result<Spectrum> {
    if n > MAX_SIZE || n3 > 64 {
        return Err(Error::Argument("tensor too large for the demo".into()));
    }
    let dims = TensorDims::new(n, n, n3)?;
    let signal = gen_low_rank(dims, rank, derive_seed(seed, &[0]))?;
    let clutter = gen_low_rank(dims, n, derive_seed(seed, &[1]))?;
    let x = signal.add_scaled(noise, &clutter)?;
    let y = tsvt(&x, tau)?;
    Ok(Spectrum {
        before: spectral_singular_values(&x)?,
        after: spectral_singular_values(&y)?,
        tnn_before: tnn(&x)?,
        tnn_after: tnn(&y)?,
        rank_before: tubal_rank(&x, DEFAULT_RANK_TOL)?,
        rank_after: tubal_rank(&y, DEFAULT_RANK_TOL)?,
    })
}

pub struct Trial {
    pub rank: usize,
    pub outcome: TrialOutcome,
}

pub fn phase_cell(n: usize, n3: usize, r_frac: f64, rho: f64, seed: u64) -> Result<Trial> {
    if n > 64 || n3 > 32 {
        return Err(Error::Argument("tensor too large for the demo".into()));
    }
    let dims = TensorDims::new(n, n, n3)?;
    let rank = rank_for_fraction(dims, r_frac);
    let spec = TrialSpec::new(dims, rank, SparsityModel::Bernoulli { rho }, seed);
    Ok(Trial {
        rank,
        outcome: run_trial(&spec, &SolverConfig::default())?,
    })
}
