/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_orbittrace_free: (a: number, b: number) => void;
export const attractor_summary: (a: number, b: number) => [number, number, number, number];
export const basin_map: (a: number, b: number, c: number, d: number, e: bigint, f: number) => [number, number, number, number];
export const lyapunov_scan: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const orbittrace_points: (a: number) => [number, number];
export const orbittrace_verdict: (a: number) => [number, number];
export const trace_orbit: (a: number, b: number, c: number, d: number, e: number, f: number, g: bigint) => [number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
