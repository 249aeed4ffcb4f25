/* tslint:disable */
/* eslint-disable */

/**
 * `[r, R(r)]` pairs at `r = λ(N+1)` for the bound state `(n, j)`, truncated
 * where the remaining weight drops below `1e-12`. Branch II needs `q < 0`.
 */
export function radial_profile(lambda: number, q: number, n: number, j: number, branch_two: boolean): Float64Array;

/**
 * `[E, δ, |S| − 1]` for `points` energies inside the scattering window
 * `0 < E < 2/λ²`, where `S_j = e^{2iδ}` and `δ ∈ (−π/2, π/2]`.
 */
export function smatrix_phase(lambda: number, q: number, j: number, points: number): Float64Array;

/**
 * `[λ, E_I, E_II]` triples for `points` values of `λ` spread evenly over
 * `[lambda_min, lambda_max]`, principal number `n`.
 */
export function spectrum_curve(q: number, n: number, lambda_min: number, lambda_max: number, points: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly radial_profile: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly smatrix_phase: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly spectrum_curve: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
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
