/* tslint:disable */
/* eslint-disable */

/**
 * Least-squares approximation of a named function.
 */
export class Projection {
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Bézier coefficients `I_0 .. I_n`.
     */
    coeffs(): Float64Array;
    constructor(_function: string, n: number, alpha: number, beta: number);
    /**
     * Approximant and target on a uniform grid, as pairs.
     */
    sample(samples: number): Float64Array;
    readonly errorSq: number;
}

/**
 * Per-point accuracy of the binary64 evaluation on `0.01, 0.02, .., 0.99`.
 *
 * Returns triples `x, min, mean` in decimal digits, capped at 17.
 */
export function accuracyProfile(n: number, alpha: number, beta: number, ref_digits: number): Float64Array;

/**
 * All `D^n_i` on a uniform grid, row-major: `samples` rows of `n+1`.
 */
export function dualCurves(n: number, alpha: number, beta: number, samples: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_projection_free: (a: number, b: number) => void;
    readonly accuracyProfile: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly dualCurves: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly projection_coeffs: (a: number) => [number, number];
    readonly projection_errorSq: (a: number) => number;
    readonly projection_new: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly projection_sample: (a: number, b: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
