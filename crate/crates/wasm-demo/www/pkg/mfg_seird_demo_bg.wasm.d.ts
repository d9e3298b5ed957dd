/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_epidemicresult_free: (a: number, b: number) => void;
export const __wbg_equilibriumresult_free: (a: number, b: number) => void;
export const epidemicresult_agg_d: (a: number) => [number, number];
export const epidemicresult_agg_e: (a: number) => [number, number];
export const epidemicresult_agg_i: (a: number) => [number, number];
export const epidemicresult_agg_r: (a: number) => [number, number];
export const epidemicresult_agg_s: (a: number) => [number, number];
export const epidemicresult_deaths: (a: number) => [number, number];
export const epidemicresult_density: (a: number) => [number, number];
export const epidemicresult_infectious: (a: number) => [number, number];
export const epidemicresult_n_rows: (a: number) => number;
export const epidemicresult_n_x: (a: number) => number;
export const epidemicresult_times: (a: number) => [number, number];
export const equilibriumresult_amenity: (a: number) => [number, number];
export const equilibriumresult_density: (a: number) => [number, number];
export const equilibriumresult_fp_residual: (a: number) => number;
export const equilibriumresult_h_max: (a: number) => number;
export const equilibriumresult_hjb_residual: (a: number) => number;
export const equilibriumresult_investment: (a: number) => [number, number];
export const equilibriumresult_iterations: (a: number) => number;
export const equilibriumresult_marginal: (a: number) => [number, number];
export const equilibriumresult_n_h: (a: number) => number;
export const equilibriumresult_n_x: (a: number) => number;
export const infection_kernel: (a: number, b: number) => [number, number, number, number];
export const run_epidemic: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number, j: number, k: number) => [number, number, number];
export const solve_equilibrium: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_start: () => void;
