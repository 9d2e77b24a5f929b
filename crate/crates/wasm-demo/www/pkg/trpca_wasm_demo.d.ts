/* tslint:disable */
/* eslint-disable */

/**
 * Images are RGBA bytes, row-major, `size x size`.
 */
export class DenoiseView {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    baseline(): Uint8Array;
    clean(): Uint8Array;
    corrupted(): Uint8Array;
    recovered(): Uint8Array;
    sparse(): Uint8Array;
    readonly iterations: number;
    readonly psnrBaseline: number;
    readonly psnrCorrupted: number;
    readonly psnrTrpca: number;
    readonly size: number;
}

/**
 * Singular values of every Fourier-domain slice, before and after t-SVT.
 */
export class SpectrumView {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    after(): Float64Array;
    /**
     * Row `k` holds slice `k`, `per_slice` values each.
     */
    before(): Float64Array;
    readonly perSlice: number;
    readonly rankAfter: number;
    readonly rankBefore: number;
    readonly slices: number;
    readonly tnnAfter: number;
    readonly tnnBefore: number;
}

export class TrialView {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly iterations: number;
    readonly rank: number;
    readonly rankHat: number;
    readonly relErrE: number;
    readonly relErrL: number;
    readonly success: boolean;
}

/**
 * Corrupts a synthetic color image and recovers it, with the channelwise
 * matrix RPCA result for comparison.
 */
export function denoiseSynthetic(size: number, fraction: number, seed: number): DenoiseView;

/**
 * One recovery trial at rank fraction `r_frac` and Bernoulli rate `rho`.
 */
export function phaseCell(n: number, n3: number, r_frac: number, rho: number, seed: number): TrialView;

export function tsvtSpectrum(n: number, n3: number, rank: number, noise: number, tau: number, seed: number): SpectrumView;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_denoiseview_free: (a: number, b: number) => void;
    readonly __wbg_spectrumview_free: (a: number, b: number) => void;
    readonly __wbg_trialview_free: (a: number, b: number) => void;
    readonly denoiseSynthetic: (a: number, b: number, c: number) => [number, number, number];
    readonly denoiseview_baseline: (a: number) => [number, number];
    readonly denoiseview_clean: (a: number) => [number, number];
    readonly denoiseview_corrupted: (a: number) => [number, number];
    readonly denoiseview_iterations: (a: number) => number;
    readonly denoiseview_psnrBaseline: (a: number) => number;
    readonly denoiseview_psnrCorrupted: (a: number) => number;
    readonly denoiseview_psnrTrpca: (a: number) => number;
    readonly denoiseview_recovered: (a: number) => [number, number];
    readonly denoiseview_size: (a: number) => number;
    readonly denoiseview_sparse: (a: number) => [number, number];
    readonly phaseCell: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly spectrumview_after: (a: number) => [number, number];
    readonly spectrumview_before: (a: number) => [number, number];
    readonly spectrumview_perSlice: (a: number) => number;
    readonly spectrumview_rankAfter: (a: number) => number;
    readonly spectrumview_rankBefore: (a: number) => number;
    readonly spectrumview_slices: (a: number) => number;
    readonly trialview_iterations: (a: number) => number;
    readonly trialview_rank: (a: number) => number;
    readonly trialview_success: (a: number) => number;
    readonly tsvtSpectrum: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly spectrumview_tnnAfter: (a: number) => number;
    readonly spectrumview_tnnBefore: (a: number) => number;
    readonly trialview_rankHat: (a: number) => number;
    readonly trialview_relErrE: (a: number) => number;
    readonly trialview_relErrL: (a: number) => number;
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
