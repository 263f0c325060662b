/* tslint:disable */
/* eslint-disable */

export class OrbitTrace {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Flattened `x1, x2, x3` triples.
     */
    readonly points: Float64Array;
    readonly verdict: string;
}

export function attractor_summary(dist: string): string;

export function basin_map(dist: string, resolution: number, trials: number, seed: bigint, steps: number): Float64Array;

export function lyapunov_scan(from: number, to: number, step: number, offset: number): Float64Array;

export function trace_orbit(dist: string, x1: number, x2: number, x3: number, steps: number, seed: bigint): OrbitTrace;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_orbittrace_free: (a: number, b: number) => void;
    readonly attractor_summary: (a: number, b: number) => [number, number, number, number];
    readonly basin_map: (a: number, b: number, c: number, d: number, e: bigint, f: number) => [number, number, number, number];
    readonly lyapunov_scan: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly orbittrace_points: (a: number) => [number, number];
    readonly orbittrace_verdict: (a: number) => [number, number];
    readonly trace_orbit: (a: number, b: number, c: number, d: number, e: number, f: number, g: bigint) => [number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
