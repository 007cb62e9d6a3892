/* tslint:disable */
/* eslint-disable */

/**
 * Nonzero local-basis terms of `T_W`.
 */
export function decomposition(d: number, f0: number): string;

/**
 * Numerical FEF of an isotropic state next to its closed form.
 */
export function fef(d: number, beta: number, restarts: number, seed: bigint): string;

/**
 * Isotropic sweep with witness value, PPT margin and Schmidt class per `β`.
 */
export function scan(d: number, f0: number, beta_min: number, beta_max: number, steps: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly decomposition: (a: number, b: number) => [number, number, number, number];
    readonly fef: (a: number, b: number, c: number, d: bigint) => [number, number, number, number];
    readonly scan: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
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
