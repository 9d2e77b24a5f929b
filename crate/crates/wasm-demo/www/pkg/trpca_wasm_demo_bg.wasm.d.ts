/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_denoiseview_free: (a: number, b: number) => void;
export const __wbg_spectrumview_free: (a: number, b: number) => void;
export const __wbg_trialview_free: (a: number, b: number) => void;
export const denoiseSynthetic: (a: number, b: number, c: number) => [number, number, number];
export const denoiseview_baseline: (a: number) => [number, number];
export const denoiseview_clean: (a: number) => [number, number];
export const denoiseview_corrupted: (a: number) => [number, number];
export const denoiseview_iterations: (a: number) => number;
export const denoiseview_psnrBaseline: (a: number) => number;
export const denoiseview_psnrCorrupted: (a: number) => number;
export const denoiseview_psnrTrpca: (a: number) => number;
export const denoiseview_recovered: (a: number) => [number, number];
export const denoiseview_size: (a: number) => number;
export const denoiseview_sparse: (a: number) => [number, number];
export const phaseCell: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
export const spectrumview_after: (a: number) => [number, number];
export const spectrumview_before: (a: number) => [number, number];
export const spectrumview_perSlice: (a: number) => number;
export const spectrumview_rankAfter: (a: number) => number;
export const spectrumview_rankBefore: (a: number) => number;
export const spectrumview_slices: (a: number) => number;
export const trialview_iterations: (a: number) => number;
export const trialview_rank: (a: number) => number;
export const trialview_success: (a: number) => number;
export const tsvtSpectrum: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const spectrumview_tnnAfter: (a: number) => number;
export const spectrumview_tnnBefore: (a: number) => number;
export const trialview_rankHat: (a: number) => number;
export const trialview_relErrE: (a: number) => number;
export const trialview_relErrL: (a: number) => number;
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
