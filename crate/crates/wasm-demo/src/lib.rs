//! Browser bindings. Every export returns a JSON string; errors come back as
//! `{"error": "..."}` so the page only ever parses one shape.

use serde::Serialize;
use serde_json::json;
use simplexity::bounds;
use simplexity::dissection::{verify_partition, Dissection};
use simplexity::enumeration::{enumerate_classes, EnumerationOptions};
use simplexity::lp::{build_lp, solve_lp, LpResultFile};
use simplexity::rational::to_display;
use wasm_bindgen::prelude::wasm_bindgen;

/// Largest n the page will enumerate; n = 5 takes about 0.3 s in wasm.
pub const MAX_LP_DIM: usize = 5;
pub const MAX_BOUNDS_DIM: usize = 400;

fn to_json<T: Serialize>(r: Result<T, String>) -> String {
    match r {
        Ok(v) => serde_json::to_string(&v).unwrap_or_else(|e| json!({ "error": e.to_string() }).to_string()),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

#[derive(Serialize)]
struct CurvePoint {
    n: usize,
    e: f64,
    f: f64,
    h_lower: f64,
    /// log10 values, for plotting on one axis
    log_e: f64,
    log_f: f64,
    log_h: f64,
    ratio: Option<f64>,
}

pub fn bounds_curves(n_max: usize) -> Result<Vec<impl Serialize>, String> {
    if n_max == 0 || n_max > MAX_BOUNDS_DIM {
        return Err(format!("n must be in 1..={MAX_BOUNDS_DIM}"));
    }
    Ok(bounds::bounds_table(n_max)
        .into_iter()
        .map(|r| CurvePoint {
            n: r.n,
            e: r.euclidean.value,
            f: r.asymptotic.value,
            h_lower: r.h_lower.value,
            log_e: r.euclidean.value.log10(),
            log_f: r.asymptotic.value.log10(),
            log_h: r.h_lower.value.log10(),
            ratio: (r.n >= 2).then(|| bounds::ratio_diagnostic(r.n)),
        })
        .collect())
}

#[derive(Serialize)]
struct LpSummary {
    classes: usize,
    nondegenerate: u64,
    rho: u64,
    bound_display: String,
    #[serde(flatten)]
    result: LpResultFile,
}

pub fn lp_bound(n: usize) -> Result<impl Serialize, String> {
    if n == 0 || n > MAX_LP_DIM {
        return Err(format!("n must be in 1..={MAX_LP_DIM} in the browser"));
    }
    let summary = enumerate_classes(n, &EnumerationOptions::default()).map_err(|e| e.to_string())?;
    let problem = build_lp(&summary.classes, n).map_err(|e| e.to_string())?;
    let solution = solve_lp(&problem).map_err(|e| e.to_string())?;
    Ok(LpSummary {
        classes: summary.classes.len(),
        nondegenerate: summary.nondegenerate,
        rho: summary.rho,
        bound_display: to_display(&solution.bound),
        result: LpResultFile::from(&solution),
    })
}

pub fn verify(text: &str) -> Result<impl Serialize, String> {
    let d = Dissection::from_json(text).map_err(|e| e.to_string())?;
    let report = verify_partition(&d);
    let passed = report.partition_ok && report.section_ok && report.profile_table_ok;
    Ok(json!({ "passed": passed, "report": report }))
}

#[wasm_bindgen(js_name = boundsCurves)]
pub fn bounds_curves_json(n_max: usize) -> String {
    to_json(bounds_curves(n_max))
}

#[wasm_bindgen(js_name = lpBound)]
pub fn lp_bound_json(n: usize) -> String {
    to_json(lp_bound(n))
}

#[wasm_bindgen(js_name = verifyDissection)]
pub fn verify_json(text: &str) -> String {
    to_json(verify(text))
}
