//! WebAssembly bindings for a single static page.
//!
//! Each exported operation is a thin wrapper over a plain function in
//! this crate, so the numerics are testable without a browser.

use avgtime::analytic::{ratio_partial_sums, totals_and_ratio};
use avgtime::engines::{sat_scan, tabulate};
use avgtime::measure::{tractability_series, to_f64, TractabilityConfig};
use avgtime::{ConnectiveTable, Formula};
use wasm_bindgen::prelude::*;

/// Largest variable count the page will tabulate.
pub const MAX_ALPHA: usize = 20;
pub const MAX_COUNTING_N: usize = 200;
pub const MAX_TERMS: usize = 1_000_000;

/// Costs of running both algorithms on one sentence.
#[wasm_bindgen]
#[derive(Debug, Clone, PartialEq)]
pub struct SentenceReport {
    canonical: String,
    size_bits: f64,
    alpha: u32,
    tabulate_time: f64,
    scan_time: f64,
    witness: Option<f64>,
    models: Vec<f64>,
}

#[wasm_bindgen]
impl SentenceReport {
    #[wasm_bindgen(getter)]
    pub fn canonical(&self) -> String {
        self.canonical.clone()
    }
    #[wasm_bindgen(getter, js_name = sizeBits)]
    pub fn size_bits(&self) -> f64 {
        self.size_bits
    }
    #[wasm_bindgen(getter)]
    pub fn alpha(&self) -> u32 {
        self.alpha
    }
    #[wasm_bindgen(getter, js_name = tabulateTime)]
    pub fn tabulate_time(&self) -> f64 {
        self.tabulate_time
    }
    #[wasm_bindgen(getter, js_name = scanTime)]
    pub fn scan_time(&self) -> f64 {
        self.scan_time
    }
    /// First satisfying assignment, if any.
    #[wasm_bindgen(getter)]
    pub fn witness(&self) -> Option<f64> {
        self.witness
    }
    /// Satisfying assignments in increasing order.
    #[wasm_bindgen(getter)]
    pub fn models(&self) -> Vec<f64> {
        self.models.clone()
    }
}

pub fn analyze(rpn: &str) -> Result<SentenceReport, String> {
    let table = ConnectiveTable::standard();
    let x = Formula::parse(rpn, &table).map_err(|e| e.to_string())?;
    if x.alpha() > MAX_ALPHA {
        return Err(format!("at most {MAX_ALPHA} distinct variables, got {}", x.alpha()));
    }
    let tab = tabulate(&x, &table);
    let scan = sat_scan(&x, &table);
    Ok(SentenceReport {
        canonical: x.render(&table),
        size_bits: x.size_bits(&table) as f64,
        alpha: x.alpha() as u32,
        tabulate_time: tab.time_units as f64,
        scan_time: scan.time_units as f64,
        witness: scan.payload.map(|m| m as f64),
        models: tab.payload.iter().map(|m| m as f64).collect(),
    })
}

/// Parses an RPN sentence over the standard connectives and runs both
/// the tabulator and the scanner on it.
#[wasm_bindgen(js_name = analyzeSentence)]
pub fn analyze_sentence(rpn: &str) -> Result<SentenceReport, JsValue> {
    analyze(rpn).map_err(|e| JsValue::from_str(&e))
}

/// `[F(0), S(0), F(1), S(1), …]`: tabulating-to-reading ratio and its
/// partial sums for sentences with `n` connectives, under exponent `p`.
pub fn counting_pairs(n_max: usize, p: u32) -> Result<Vec<f64>, String> {
    if n_max > MAX_COUNTING_N {
        return Err(format!("N must be at most {MAX_COUNTING_N}"));
    }
    let sums = ratio_partial_sums(n_max, p);
    Ok((0..=n_max)
        .flat_map(|n| [to_f64(&totals_and_ratio(n, p).ratio), to_f64(&sums[n])])
        .collect())
}

#[wasm_bindgen(js_name = countingCurve)]
pub fn counting_curve(n_max: usize, p: u32) -> Result<Vec<f64>, JsValue> {
    counting_pairs(n_max, p).map_err(|e| JsValue::from_str(&e))
}

/// Partial averages of one of the built-in examples, thinned to about
/// `points` log-spaced prefixes.
#[wasm_bindgen]
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    ks: Vec<f64>,
    values: Vec<f64>,
    verdict: String,
}

#[wasm_bindgen]
impl Curve {
    #[wasm_bindgen(getter)]
    pub fn ks(&self) -> Vec<f64> {
        self.ks.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn values(&self) -> Vec<f64> {
        self.values.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn verdict(&self) -> String {
        self.verdict.clone()
    }
}

pub fn partial_averages(example: &str, terms: usize, points: usize) -> Result<Curve, String> {
    if terms == 0 || terms > MAX_TERMS {
        return Err(format!("terms must be in 1..={MAX_TERMS}"));
    }
    let cfg = TractabilityConfig::default();
    let report = match example {
        "harmonic" => tractability_series(
            (1..=terms).map(|n| {
                let n = n as f64;
                (1.0 / n, 1.0 / (n * n))
            }),
            &cfg,
        ),
        "geometric" => tractability_series((0..terms).map(|n| (0.5f64.powi(n as i32), 0.25f64.powi(n as i32))), &cfg),
        "constant" => tractability_series((0..terms).map(|n| (7.0 * 0.25f64.powi(n as i32), 0.25f64.powi(n as i32))), &cfg),
        other => return Err(format!("unknown example `{other}`")),
    }
    .map_err(|e| e.to_string())?;
    let mut ks = log_spaced(terms, points.max(2));
    ks.dedup();
    Ok(Curve {
        values: ks.iter().map(|&k| report.at(k)).collect(),
        ks: ks.into_iter().map(|k| k as f64).collect(),
        verdict: report.verdict.to_string(),
    })
}

#[wasm_bindgen(js_name = tractabilityCurve)]
pub fn tractability_curve(example: &str, terms: usize, points: usize) -> Result<Curve, JsValue> {
    partial_averages(example, terms, points).map_err(|e| JsValue::from_str(&e))
}

fn log_spaced(terms: usize, points: usize) -> Vec<usize> {
    let top = (terms as f64).ln();
    (0..points)
        .map(|i| ((top * i as f64 / (points - 1) as f64).exp().round() as usize).clamp(1, terms))
        .collect()
}
