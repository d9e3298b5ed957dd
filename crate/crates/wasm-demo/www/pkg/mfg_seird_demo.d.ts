/* tslint:disable */
/* eslint-disable */

/**
 * Epidemic run payload: space-time fields and aggregate series.
 */
export class EpidemicResult {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    agg_d(): Float64Array;
    agg_e(): Float64Array;
    agg_i(): Float64Array;
    agg_r(): Float64Array;
    agg_s(): Float64Array;
    /**
     * Death field, row-major like `infectious`.
     */
    deaths(): Float64Array;
    /**
     * The density profile the run used.
     */
    density(): Float64Array;
    /**
     * Infectious field, row-major: infectious[row * n_x + k].
     */
    infectious(): Float64Array;
    times(): Float64Array;
    readonly n_rows: number;
    readonly n_x: number;
}

/**
 * Stationary equilibrium payload for the page.
 */
export class EquilibriumResult {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Amenity level per x node.
     */
    amenity(): Float64Array;
    /**
     * Joint density, x-major: density[i * n_h + j].
     */
    density(): Float64Array;
    /**
     * Optimal investment rate, x-major like the density.
     */
    investment(): Float64Array;
    /**
     * Spatial marginal of the stationary density.
     */
    marginal(): Float64Array;
    readonly fp_residual: number;
    readonly h_max: number;
    readonly hjb_residual: number;
    readonly iterations: number;
    readonly n_h: number;
    readonly n_x: number;
}

/**
 * Sample the infection kernel on an n_x grid for the kernel explorer.
 */
export function infection_kernel(n_x: number, chi: number): Float64Array;

/**
 * Run the spatial epidemic.
 *
 * `marginal` is the spatial density to use (resampled to `n_x`); pass an
 * empty array for the uniform profile. `density_beta` switches the
 * transmission law between constant and density-dependent.
 */
export function run_epidemic(marginal: Float64Array, n_x: number, density_beta: boolean, chi: number, i0: number, r0: number, center: number, t_end: number, dt: number, snapshot_every: number): EpidemicResult;

/**
 * Solve the stationary equilibrium on an n_x by n_h grid.
 *
 * `amenity_kind` is "sin_peak" or "uniform"; `rho` is the discount rate.
 */
export function solve_equilibrium(n_x: number, n_h: number, rho: number, amenity_kind: string, damping: number): EquilibriumResult;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_epidemicresult_free: (a: number, b: number) => void;
    readonly __wbg_equilibriumresult_free: (a: number, b: number) => void;
    readonly epidemicresult_agg_d: (a: number) => [number, number];
    readonly epidemicresult_agg_e: (a: number) => [number, number];
    readonly epidemicresult_agg_i: (a: number) => [number, number];
    readonly epidemicresult_agg_r: (a: number) => [number, number];
    readonly epidemicresult_agg_s: (a: number) => [number, number];
    readonly epidemicresult_deaths: (a: number) => [number, number];
    readonly epidemicresult_density: (a: number) => [number, number];
    readonly epidemicresult_infectious: (a: number) => [number, number];
    readonly epidemicresult_n_rows: (a: number) => number;
    readonly epidemicresult_n_x: (a: number) => number;
    readonly epidemicresult_times: (a: number) => [number, number];
    readonly equilibriumresult_amenity: (a: number) => [number, number];
    readonly equilibriumresult_density: (a: number) => [number, number];
    readonly equilibriumresult_fp_residual: (a: number) => number;
    readonly equilibriumresult_h_max: (a: number) => number;
    readonly equilibriumresult_hjb_residual: (a: number) => number;
    readonly equilibriumresult_investment: (a: number) => [number, number];
    readonly equilibriumresult_iterations: (a: number) => number;
    readonly equilibriumresult_marginal: (a: number) => [number, number];
    readonly equilibriumresult_n_h: (a: number) => number;
    readonly equilibriumresult_n_x: (a: number) => number;
    readonly infection_kernel: (a: number, b: number) => [number, number, number, number];
    readonly run_epidemic: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number, j: number, k: number) => [number, number, number];
    readonly solve_equilibrium: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __externref_table_dealloc: (a: number) => void;
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
