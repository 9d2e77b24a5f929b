//! wasm-bindgen bindings for the static page in `www/`.
//!
//! The exported functions are thin wrappers over [`demo`], which is plain
//! Rust and tested natively.

use wasm_bindgen::prelude::*;

pub mod demo;

fn js(e: trpca_core::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// Images are RGBA bytes, row-major, `size x size`.
#[wasm_bindgen]
pub struct DenoiseView {
    inner: demo::Denoised,
}

#[wasm_bindgen]
impl DenoiseView {
    #[wasm_bindgen(getter)]
    pub fn size(&self) -> usize {
        self.inner.size
    }
    pub fn clean(&self) -> Vec<u8> {
        self.inner.clean.clone()
    }
    pub fn corrupted(&self) -> Vec<u8> {
        self.inner.corrupted.clone()
    }
    pub fn recovered(&self) -> Vec<u8> {
        self.inner.recovered.clone()
    }
    pub fn sparse(&self) -> Vec<u8> {
        self.inner.sparse.clone()
    }
    pub fn baseline(&self) -> Vec<u8> {
        self.inner.baseline.clone()
    }
    #[wasm_bindgen(getter, js_name = psnrCorrupted)]
    pub fn psnr_corrupted(&self) -> f64 {
        self.inner.psnr_corrupted
    }
    #[wasm_bindgen(getter, js_name = psnrTrpca)]
    pub fn psnr_trpca(&self) -> f64 {
        self.inner.psnr_trpca
    }
    #[wasm_bindgen(getter, js_name = psnrBaseline)]
    pub fn psnr_baseline(&self) -> f64 {
        self.inner.psnr_baseline
    }
    #[wasm_bindgen(getter)]
    pub fn iterations(&self) -> usize {
        self.inner.iterations
    }
}

/// Corrupts a synthetic color image and recovers it, with the channelwise
/// matrix RPCA result for comparison.
#[wasm_bindgen(js_name = denoiseSynthetic)]
pub fn denoise_synthetic(size: usize, fraction: f64, seed: u32) -> Result<DenoiseView, JsError> {
    demo::denoise_synthetic(size, fraction, seed as u64)
        .map(|inner| DenoiseView { inner })
        .map_err(js)
}

/// Singular values of every Fourier-domain slice, before and after t-SVT.
#[wasm_bindgen]
pub struct SpectrumView {
    inner: demo::Spectrum,
}

#[wasm_bindgen]
impl SpectrumView {
    /// Row `k` holds slice `k`, `per_slice` values each.
    pub fn before(&self) -> Vec<f64> {
        self.inner.before.concat()
    }
    pub fn after(&self) -> Vec<f64> {
        self.inner.after.concat()
    }
    #[wasm_bindgen(getter)]
    pub fn slices(&self) -> usize {
        self.inner.before.len()
    }
    #[wasm_bindgen(getter, js_name = perSlice)]
    pub fn per_slice(&self) -> usize {
        self.inner.before.first().map_or(0, Vec::len)
    }
    #[wasm_bindgen(getter, js_name = tnnBefore)]
    pub fn tnn_before(&self) -> f64 {
        self.inner.tnn_before
    }
    #[wasm_bindgen(getter, js_name = tnnAfter)]
    pub fn tnn_after(&self) -> f64 {
        self.inner.tnn_after
    }
    #[wasm_bindgen(getter, js_name = rankBefore)]
    pub fn rank_before(&self) -> usize {
        self.inner.rank_before
    }
    #[wasm_bindgen(getter, js_name = rankAfter)]
    pub fn rank_after(&self) -> usize {
        self.inner.rank_after
    }
}

#[wasm_bindgen(js_name = tsvtSpectrum)]
pub fn tsvt_spectrum(n: usize, n3: usize, rank: usize, noise: f64, tau: f64, seed: u32) -> Result<SpectrumView, JsError> {
    demo::tsvt_spectrum(n, n3, rank, noise, tau, seed as u64)
        .map(|inner| SpectrumView { inner })
        .map_err(js)
}

#[wasm_bindgen]
pub struct TrialView {
    inner: demo::Trial,
}

#[wasm_bindgen]
impl TrialView {
    #[wasm_bindgen(getter)]
    pub fn rank(&self) -> usize {
        self.inner.rank
    }
    #[wasm_bindgen(getter, js_name = rankHat)]
    pub fn rank_hat(&self) -> usize {
        self.inner.outcome.rank_hat
    }
    #[wasm_bindgen(getter, js_name = relErrL)]
    pub fn rel_err_l(&self) -> f64 {
        self.inner.outcome.rel_err_l
    }
    #[wasm_bindgen(getter, js_name = relErrE)]
    pub fn rel_err_e(&self) -> f64 {
        self.inner.outcome.rel_err_e
    }
    #[wasm_bindgen(getter)]
    pub fn success(&self) -> bool {
        self.inner.outcome.success
    }
    #[wasm_bindgen(getter)]
    pub fn iterations(&self) -> usize {
        self.inner.outcome.iterations
    }
}

/// One recovery trial at rank fraction `r_frac` and Bernoulli rate `rho`.
#[wasm_bindgen(js_name = phaseCell)]
pub fn phase_cell(n: usize, n3: usize, r_frac: f64, rho: f64, seed: u32) -> Result<TrialView, JsError> {
    demo::phase_cell(n, n3, r_frac, rho, seed as u64)
        .map(|inner| TrialView { inner })
        .map_err(js)
}
