/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_convergence_free: (a: number, b: number) => void;
export const asymmetricCurve: (a: number, b: number) => [number, number, number, number];
export const cloningTable: (a: number, b: number, c: number) => [number, number, number, number];
export const convergence_checkpoints: (a: number) => [number, number];
export const convergence_exploitability: (a: number) => [number, number];
export const convergence_value: (a: number) => number;
export const convergence_x: (a: number) => [number, number];
export const convergence_y: (a: number) => [number, number];
export const regretConvergence: (a: number, b: number, c: number, d: number) => [number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_start: () => void;
