/* tslint:disable */
/* eslint-disable */

/**
 * Splits a list of tie strengths into five rings (natural breaks) and
 * counts the modes of their distribution.
 */
export function classify_strengths(text: string): string;

/**
 * Corrected correlation as a function of the SD ratio u in [0.25, u_max].
 * With `r_xz` and `r_zy` both zero the direct-restriction formula is used,
 * otherwise the third-variable one.
 */
export function correction_curve(r: number, r_xz: number, r_zy: number, u_max: number, steps: number): string;

/**
 * Strength of one ego-alter relation from the author counts of the shared
 * papers and the relation length in years.
 */
export function relation_strength(author_counts: string, duration_years: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly classify_strengths: (a: number, b: number) => [number, number];
    readonly correction_curve: (a: number, b: number, c: number, d: number, e: number) => [number, number];
    readonly relation_strength: (a: number, b: number, c: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
