/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_projection_free: (a: number, b: number) => void;
export const accuracyProfile: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const dualCurves: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const projection_coeffs: (a: number) => [number, number];
export const projection_errorSq: (a: number) => number;
export const projection_new: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
export const projection_sample: (a: number, b: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_start: () => void;
