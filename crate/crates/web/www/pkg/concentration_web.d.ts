/* tslint:disable */
/* eslint-disable */

/**
 * Basis function of degree `degree` sampled on `points` equally spaced abscissae.
 */
export function basis_profile(degree: number, from: number, to: number, points: number): Float64Array;

/**
 * Kernel row `y ↦ K(x, y)` followed by `|K̂(x, y)|`, both on the same grid.
 * With `band > 0` a third block holds the weighted Paley–Wiener kernel.
 */
export function kernel_profile(x: number, from: number, to: number, points: number, band: number): Float64Array;

/**
 * Eigenvalues, largest first, of a concentration operator. `mode` is one of
 * `one-sided`, `freq-sided`, `two-sided`, `pw`; `dim` is capped at [`MAX_DIM`].
 */
export function spectrum(mode: string, r: number, t: number, dim: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly basis_profile: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly kernel_profile: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly spectrum: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
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
