/* tslint:disable */
/* eslint-disable */

/**
 * Boundary-element hoop stress around a unit hole against the closed form
 * (JSON: `samples[{theta, computed, exact}]`, `max_relative_error`).
 */
export function kirsch_hoop(s1: number, s2: number, elements: number): string;

/**
 * Estimates for two pores in the beam at surface distance `distance`.
 */
export function pair_estimate(distance: number, radius: number): string;

/**
 * Topological-derivative map of the pore-free beam on an `nx × ny` grid.
 */
export function topology_map(nx: number, ny: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly kirsch_hoop: (a: number, b: number, c: number) => [number, number, number, number];
    readonly pair_estimate: (a: number, b: number) => [number, number, number, number];
    readonly topology_map: (a: number, b: number) => [number, number, number, number];
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
