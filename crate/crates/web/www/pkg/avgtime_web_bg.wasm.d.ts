/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_curve_free: (a: number, b: number) => void;
export const __wbg_sentencereport_free: (a: number, b: number) => void;
export const analyzeSentence: (a: number, b: number) => [number, number, number];
export const countingCurve: (a: number, b: number) => [number, number, number, number];
export const curve_ks: (a: number) => [number, number];
export const curve_values: (a: number) => [number, number];
export const curve_verdict: (a: number) => [number, number];
export const sentencereport_alpha: (a: number) => number;
export const sentencereport_canonical: (a: number) => [number, number];
export const sentencereport_models: (a: number) => [number, number];
export const sentencereport_scanTime: (a: number) => number;
export const sentencereport_sizeBits: (a: number) => number;
export const sentencereport_tabulateTime: (a: number) => number;
export const sentencereport_witness: (a: number) => [number, number];
export const tractabilityCurve: (a: number, b: number, c: number, d: number) => [number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
