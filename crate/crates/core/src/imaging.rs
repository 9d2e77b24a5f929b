//! Image denoising with tensor robust PCA.
//!
//! Images live in `[0, 1]` while solving; bytes are converted at the
//! boundary. A grayscale stack becomes an `h x w x frames` tensor and a color
//! image an `h x w x 3` tensor, one frontal slice per frame or channel.

use std::fmt;

use rand::seq::index;
use rand::Rng;

use crate::error::{Error, Result};
use crate::netpbm::{PnmImage, PnmKind};
use crate::parallel::par_map;
use crate::solver::{solve, SolverConfig};
use crate::synth::rng_from_seed;
use crate::tensor::{Tensor3, TensorDims};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StackKind {
    /// Any number of grayscale frames.
    Grayscale,
    /// Exactly three planes: red, green, blue.
    Color,
}

/// Frames of equal size, each row-major `height x width` bytes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImageStack {
    pub height: usize,
    pub width: usize,
    pub kind: StackKind,
    pub frames: Vec<Vec<u8>>,
}

impl ImageStack {
    pub fn new(height: usize, width: usize, kind: StackKind, frames: Vec<Vec<u8>>) -> Result<Self> {
        if height == 0 || width == 0 || frames.is_empty() {
            return Err(Error::Argument("image stack must be non-empty".into()));
        }
        if kind == StackKind::Color && frames.len() != 3 {
            return Err(Error::Argument(format!("color image needs 3 planes, got {}", frames.len())));
        }
        if let Some(k) = frames.iter().position(|f| f.len() != height * width) {
            return Err(Error::Shape(format!(
                "frame {k} has {} pixels, expected {height}x{width}",
                frames[k].len()
            )));
        }
        Ok(Self {
            height,
            width,
            kind,
            frames,
        })
    }

    /// A PGM becomes a one-frame stack, a PPM a three-plane color stack.
    pub fn from_pnm(img: &PnmImage) -> Result<Self> {
        let (h, w) = (img.height, img.width);
        match img.kind {
            PnmKind::Gray => Self::new(h, w, StackKind::Grayscale, vec![img.samples.clone()]),
            PnmKind::Color => {
                let planes = (0..3)
                    .map(|c| img.samples.iter().skip(c).step_by(3).copied().collect())
                    .collect();
                Self::new(h, w, StackKind::Color, planes)
            }
        }
    }

    /// Stacks grayscale images of identical size as frames.
    pub fn from_gray_images(images: &[PnmImage]) -> Result<Self> {
        let first = images
            .first()
            .ok_or_else(|| Error::Argument("no images supplied".into()))?;
        let mut frames = Vec::with_capacity(images.len());
        for (k, img) in images.iter().enumerate() {
            if img.kind != PnmKind::Gray {
                return Err(Error::Format(format!("image {k} is not grayscale")));
            }
            if (img.height, img.width) != (first.height, first.width) {
                return Err(Error::Shape(format!("image {k} differs in size from image 0")));
            }
            frames.push(img.samples.clone());
        }
        Self::new(first.height, first.width, StackKind::Grayscale, frames)
    }

    /// Color stacks give one PPM; grayscale stacks one PGM per frame.
    pub fn to_pnms(&self) -> Vec<PnmImage> {
        let (h, w) = (self.height, self.width);
        match self.kind {
            StackKind::Color => {
                let mut samples = Vec::with_capacity(3 * h * w);
                for p in 0..h * w {
                    samples.extend(self.frames.iter().map(|f| f[p]));
                }
                vec![PnmImage::new(PnmKind::Color, w, h, samples).expect("consistent size")]
            }
            StackKind::Grayscale => self
                .frames
                .iter()
                .map(|f| PnmImage::new(PnmKind::Gray, w, h, f.clone()).expect("consistent size"))
                .collect(),
        }
    }
}

/// Pixel `(row, col)` of frame `k` becomes entry `(row, col, k)` scaled to
/// `[0, 1]`.
pub fn stack_to_tensor(stack: &ImageStack) -> Tensor3 {
    let dims = TensorDims::new(stack.height, stack.width, stack.frames.len()).expect("non-empty stack");
    let w = stack.width;
    Tensor3::from_fn(dims, |i, j, k| stack.frames[k][i * w + j] as f64 / 255.0).expect("finite pixels")
}

/// Clamps to `[0, 1]` and quantizes back to bytes.
pub fn tensor_to_stack(t: &Tensor3, kind: StackKind) -> Result<ImageStack> {
    let d = t.dims();
    let frames = (0..d.n3)
        .map(|k| {
            let mut f = Vec::with_capacity(d.n1 * d.n2);
            for i in 0..d.n1 {
                for j in 0..d.n2 {
                    f.push((t[(i, j, k)].clamp(0.0, 1.0) * 255.0).round() as u8);
                }
            }
            f
        })
        .collect();
    ImageStack::new(d.n1, d.n2, kind, frames)
}

pub fn clamp_unit(t: &Tensor3) -> Tensor3 {
    t.map(|v| v.clamp(0.0, 1.0))
}

/// Which entries `corrupt_pixels` overwrote.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorruptionMask {
    pub dims: TensorDims,
    pub flags: Vec<bool>,
}

impl CorruptionMask {
    pub fn count(&self) -> usize {
        self.flags.iter().filter(|&&f| f).count()
    }

    pub fn count_in_slice(&self, k: usize) -> usize {
        let len = self.dims.slice_len();
        self.flags[k * len..(k + 1) * len].iter().filter(|&&f| f).count()
    }

    pub fn is_set(&self, i: usize, j: usize, k: usize) -> bool {
        self.flags[self.dims.offset(i, j, k)]
    }

    /// Per pixel: corrupted in at least one frontal slice.
    pub fn union(&self) -> Vec<bool> {
        let d = self.dims;
        let mut out = vec![false; d.slice_len()];
        for k in 0..d.n3 {
            for (p, o) in out.iter_mut().enumerate() {
                *o |= self.flags[k * d.slice_len() + p];
            }
        }
        out
    }

    /// Fraction of pixel positions corrupted in at least one slice.
    pub fn union_fraction(&self) -> f64 {
        let u = self.union();
        u.iter().filter(|&&f| f).count() as f64 / u.len() as f64
    }

    /// Mask image for slice `k` (or the union when `None`): 255 = corrupted.
    pub fn to_pgm(&self, k: Option<usize>) -> PnmImage {
        let d = self.dims;
        let column_major: Vec<bool> = match k {
            Some(k) => self.flags[k * d.slice_len()..(k + 1) * d.slice_len()].to_vec(),
            None => self.union(),
        };
        let mut samples = Vec::with_capacity(d.slice_len());
        for i in 0..d.n1 {
            for j in 0..d.n2 {
                samples.push(if column_major[i + d.n1 * j] { 255 } else { 0 });
            }
        }
        PnmImage::new(PnmKind::Gray, d.n2, d.n1, samples).expect("consistent size")
    }
}

/// In every frontal slice, replaces `round(fraction * n1 * n2)` uniformly
/// chosen entries by i.i.d. uniform values in `[0, 1]`. Slices are
/// corrupted independently, so color channels get independent positions.
pub fn corrupt_pixels(x: &Tensor3, fraction: f64, seed: u64) -> Result<(Tensor3, CorruptionMask)> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(Error::Argument(format!("corruption fraction {fraction} outside [0, 1]")));
    }
    let d = x.dims();
    let per_slice = (fraction * d.slice_len() as f64).round() as usize;
    let mut rng = rng_from_seed(seed);
    let mut data = x.as_slice().to_vec();
    let mut flags = vec![false; d.len()];
    for k in 0..d.n3 {
        let base = k * d.slice_len();
        for p in index::sample(&mut rng, d.slice_len(), per_slice).iter() {
            data[base + p] = rng.random::<f64>();
            flags[base + p] = true;
        }
    }
    Ok((Tensor3::from_vec(d, data)?, CorruptionMask { dims: d, flags }))
}

/// Peak signal-to-noise ratio in decibels. Identical inputs give `+inf`,
/// see [`Psnr::is_exact`].
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Psnr(pub f64);

impl Psnr {
    pub fn db(self) -> f64 {
        self.0
    }

    /// Whether reference and estimate were identical.
    pub fn is_exact(self) -> bool {
        self.0 == f64::INFINITY
    }
}

impl fmt::Display for Psnr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            f.write_str("inf")
        } else {
            write!(f, "{:.4}", self.0)
        }
    }
}

/// `10 log10(peak^2 / MSE)` over all entries.
pub fn psnr(reference: &Tensor3, estimate: &Tensor3, peak: f64) -> Result<Psnr> {
    if !(peak > 0.0) || !peak.is_finite() {
        return Err(Error::Argument(format!("peak {peak} must be positive")));
    }
    let diff = estimate.add_scaled(-1.0, reference)?;
    let mse = diff.norm_fro().powi(2) / diff.dims().len() as f64;
    if mse == 0.0 {
        return Ok(Psnr(f64::INFINITY));
    }
    Ok(Psnr(10.0 * (peak * peak / mse).log10()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenoiseReport {
    pub psnr_trpca: Psnr,
    pub psnr_baseline: Option<Psnr>,
    pub corruption_fraction: f64,
    pub solver_iterations: usize,
    pub converged: bool,
}

#[derive(Clone, Debug)]
pub struct DenoiseOutcome {
    pub report: DenoiseReport,
    pub clean: Tensor3,
    pub corrupted: Tensor3,
    pub mask: CorruptionMask,
    /// Recovered low-rank part, clamped to `[0, 1]`.
    pub low_rank: Tensor3,
    pub sparse: Tensor3,
    /// Channelwise RPCA reconstruction, clamped, when requested.
    pub baseline: Option<Tensor3>,
}

/// Result of [`rpca_channelwise_baseline`].
#[derive(Clone, Debug)]
pub struct BaselineOutcome {
    pub psnr: Psnr,
    pub recovered: Tensor3,
    /// Largest iteration count over the per-slice solves.
    pub iterations: usize,
    pub converged: bool,
}

/// Corrupts `image`, recovers it with TRPCA and scores the clamped low-rank
/// part against the clean image at peak 1.
pub fn denoise(
    image: &ImageStack,
    fraction: f64,
    seed: u64,
    config: &SolverConfig,
    with_baseline: bool,
) -> Result<DenoiseOutcome> {
    let clean = stack_to_tensor(image);
    let (corrupted, mask) = corrupt_pixels(&clean, fraction, seed)?;
    let out = solve(&corrupted, config)?;
    let low_rank = clamp_unit(&out.low_rank);
    let psnr_trpca = psnr(&clean, &low_rank, 1.0)?;
    let baseline = if with_baseline {
        Some(rpca_channelwise_baseline(image, &corrupted, config)?)
    } else {
        None
    };
    Ok(DenoiseOutcome {
        report: DenoiseReport {
            psnr_trpca,
            psnr_baseline: baseline.as_ref().map(|b| b.psnr),
            corruption_fraction: fraction,
            solver_iterations: out.iterations,
            converged: out.converged,
        },
        clean,
        corrupted,
        mask,
        low_rank,
        sparse: out.sparse,
        baseline: baseline.map(|b| b.recovered),
    })
}

/// Matrix RPCA on each frontal slice separately (the same solver with
/// `n3 = 1`, so `lambda = 1/sqrt(max(h, w))` unless `config` fixes it),
/// reassembled and scored against the clean image.
pub fn rpca_channelwise_baseline(
    image: &ImageStack,
    corrupted: &Tensor3,
    config: &SolverConfig,
) -> Result<BaselineOutcome> {
    let clean = stack_to_tensor(image);
    if clean.dims() != corrupted.dims() {
        return Err(Error::Shape(format!("image is {}, corrupted tensor {}", clean.dims(), corrupted.dims())));
    }
    let d = corrupted.dims();
    let slice_dims = TensorDims::new(d.n1, d.n2, 1)?;
    let solved = par_map(d.n3, |k| {
        let x = Tensor3::from_vec(slice_dims, corrupted.slice_data(k)?.to_vec())?;
        solve(&x, config)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let mut data = Vec::with_capacity(d.len());
    for r in &solved {
        data.extend_from_slice(r.low_rank.as_slice());
    }
    let recovered = clamp_unit(&Tensor3::from_vec(d, data)?);
    Ok(BaselineOutcome {
        psnr: psnr(&clean, &recovered, 1.0)?,
        recovered,
        iterations: solved.iter().map(|r| r.iterations).max().unwrap_or(0),
        converged: solved.iter().all(|r| r.converged),
    })
}
