/* tslint:disable */
/* eslint-disable */

/**
 * Averaged RM+ play: checkpoints, exploitability and the final profile.
 */
export class Convergence {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    checkpoints(): Float64Array;
    exploitability(): Float64Array;
    value(): number;
    x(): Float64Array;
    y(): Float64Array;
}

export function asymmetricCurve(d: number, points: number): Float64Array;

export function cloningTable(d: number, n: number, m_max: number): Float64Array;

export function regretConvergence(matrix: string, iterations: number, every: number): Convergence;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_convergence_free: (a: number, b: number) => void;
    readonly asymmetricCurve: (a: number, b: number) => [number, number, number, number];
    readonly cloningTable: (a: number, b: number, c: number) => [number, number, number, number];
    readonly convergence_checkpoints: (a: number) => [number, number];
    readonly convergence_exploitability: (a: number) => [number, number];
    readonly convergence_value: (a: number) => number;
    readonly convergence_x: (a: number) => [number, number];
    readonly convergence_y: (a: number) => [number, number];
    readonly regretConvergence: (a: number, b: number, c: number, d: number) => [number, number, number];
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
