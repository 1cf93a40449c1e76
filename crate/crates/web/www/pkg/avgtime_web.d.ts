/* tslint:disable */
/* eslint-disable */

/**
 * Partial averages of one of the built-in examples, thinned to about
 * `points` log-spaced prefixes.
 */
export class Curve {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly ks: Float64Array;
    readonly values: Float64Array;
    readonly verdict: string;
}

/**
 * Costs of running both algorithms on one sentence.
 */
export class SentenceReport {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly alpha: number;
    readonly canonical: string;
    /**
     * Satisfying assignments in increasing order.
     */
    readonly models: Float64Array;
    readonly scanTime: number;
    readonly sizeBits: number;
    readonly tabulateTime: number;
    /**
     * First satisfying assignment, if any.
     */
    readonly witness: number | undefined;
}

/**
 * Parses an RPN sentence over the standard connectives and runs both
 * the tabulator and the scanner on it.
 */
export function analyzeSentence(rpn: string): SentenceReport;

export function countingCurve(n_max: number, p: number): Float64Array;

export function tractabilityCurve(example: string, terms: number, points: number): Curve;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_curve_free: (a: number, b: number) => void;
    readonly __wbg_sentencereport_free: (a: number, b: number) => void;
    readonly analyzeSentence: (a: number, b: number) => [number, number, number];
    readonly countingCurve: (a: number, b: number) => [number, number, number, number];
    readonly curve_ks: (a: number) => [number, number];
    readonly curve_values: (a: number) => [number, number];
    readonly curve_verdict: (a: number) => [number, number];
    readonly sentencereport_alpha: (a: number) => number;
    readonly sentencereport_canonical: (a: number) => [number, number];
    readonly sentencereport_models: (a: number) => [number, number];
    readonly sentencereport_scanTime: (a: number) => number;
    readonly sentencereport_sizeBits: (a: number) => number;
    readonly sentencereport_tabulateTime: (a: number) => number;
    readonly sentencereport_witness: (a: number) => [number, number];
    readonly tractabilityCurve: (a: number, b: number, c: number, d: number) => [number, number, number];
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
