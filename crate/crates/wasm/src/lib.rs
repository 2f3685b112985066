//! wasm-bindgen surface for the static demo page in `www/`.
//!
//! The exported functions are thin wrappers over plain Rust functions that
//! return `Result<_, String>`, so the logic is testable off the browser.

use ising_composite::analysis::{fidelity_curve, threshold_report};
use ising_composite::ising::{compile_ising, ScheduleExport};
use ising_composite::{Branch, Family, PulseSequence, Quaternion, TwoQubitPropagator};
use serde::Serialize;
use wasm_bindgen::prelude::*;

fn sequence(family: &str, theta_deg: f64) -> Result<PulseSequence, String> {
    let family: Family = family.parse().map_err(|e: ising_composite::Error| e.to_string())?;
    family
        .build(theta_deg.to_radians(), Branch::Plus)
        .map_err(|e| e.to_string())
}

/// Fidelity values on a uniform grid over `[g_min, g_max]`.
pub fn curve_values(
    family: &str,
    theta_deg: f64,
    ideal_deg: f64,
    g_min: f64,
    g_max: f64,
    samples: usize,
) -> Result<Vec<f64>, String> {
    let seq = sequence(family, theta_deg)?;
    let curve = fidelity_curve(&seq, ideal_deg.to_radians(), g_min, g_max, samples).map_err(|e| e.to_string())?;
    Ok(curve.into_iter().map(|p| p.fidelity).collect())
}

/// ε/δ report for the four families as a JSON array.
pub fn thresholds_json(theta_deg: f64, tol: f64) -> Result<String, String> {
    let reports = Family::BUILT_IN
        .iter()
        .map(|f| {
            let seq = f
                .build(theta_deg.to_radians(), Branch::Plus)
                .map_err(|e| e.to_string())?;
            threshold_report(&seq, tol).map_err(|e| e.to_string())
        })
        .collect::<Result<Vec<_>, String>>()?;
    serde_json::to_string(&reports).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct CompiledView {
    schedule: ScheduleExport,
    /// Largest |F_propagator − F_quaternion| over g ∈ [−1.2, 0.3].
    max_deviation: f64,
}

/// Compiled Ising schedule plus a fidelity-equivalence spot check, as JSON.
pub fn schedule_json(family: &str, theta_deg: f64, spin: usize) -> Result<String, String> {
    let seq = sequence(family, theta_deg)?;
    let sched = compile_ising(&seq, spin).map_err(|e| e.to_string())?;
    let gate = sched.ideal_gate();
    let id = TwoQubitPropagator::identity();
    let max_deviation = (0..=150)
        .map(|i| -1.2 + 1.5 * i as f64 / 150.0)
        .map(|g| {
            let u = sched.propagator(g);
            let q = seq.net_quaternion(g);
            (u.fidelity(&gate) - q.fidelity(&seq.ideal()))
                .abs()
                .max((u.fidelity(&id) - q.fidelity(&Quaternion::IDENTITY)).abs())
        })
        .fold(0.0, f64::max);
    serde_json::to_string(&CompiledView {
        schedule: sched.export(),
        max_deviation,
    })
    .map_err(|e| e.to_string())
}

#[wasm_bindgen(js_name = fidelityCurve)]
pub fn fidelity_curve_js(
    family: &str,
    theta_deg: f64,
    ideal_deg: f64,
    g_min: f64,
    g_max: f64,
    samples: usize,
) -> Result<Vec<f64>, JsError> {
    curve_values(family, theta_deg, ideal_deg, g_min, g_max, samples).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = thresholdTable)]
pub fn threshold_table_js(theta_deg: f64, tol: f64) -> Result<String, JsError> {
    thresholds_json(theta_deg, tol).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = compileSchedule)]
pub fn compile_schedule_js(family: &str, theta_deg: f64, spin: usize) -> Result<String, JsError> {
    schedule_json(family, theta_deg, spin).map_err(|e| JsError::new(&e))
}
