//! Browser bindings: porosity certification, word counts and horocycle orbits
//! on the Bolza surface. Every function takes plain numbers or JSON and
//! returns a JSON string.

use num_complex::Complex64;
use serde::Serialize;
use wasm_bindgen::prelude::*;

use fuplab_core::hyperbolic::observables::random_points;
use fuplab_core::hyperbolic::{horocycle_flow, Direction, FuchsianGroup, Observable};
use fuplab_core::intervals::{porosity_check, triadic_cantor};
use fuplab_core::words::count_x;
use fuplab_core::{IntervalSet, PartitionParams, PorosityReport};

/// Largest number of orbit samples returned to the page.
pub const MAX_TRACE_POINTS: usize = 20_000;

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("results serialize")
}

#[derive(Serialize)]
struct PorosityOut {
    set: IntervalSet,
    report: PorosityReport,
}

/// Porosity of `set_json` (an interval set), or of the triadic Cantor set of
/// `cantor_level` when `set_json` is empty.
pub fn porosity_json(set_json: &str, cantor_level: u32, nu: f64, alpha0: f64) -> Result<String, String> {
    let set = if set_json.trim().is_empty() {
        if cantor_level > 14 {
            return Err("cantor level must be at most 14".into());
        }
        triadic_cantor(cantor_level)
    } else {
        IntervalSet::from_json(set_json).map_err(|e| e.to_string())?
    };
    let report = porosity_check(&set, nu, alpha0, 1.0).map_err(|e| e.to_string())?;
    Ok(to_json(&PorosityOut { set, report }))
}

pub fn word_count_json(n0: u32, alpha: f64) -> Result<String, String> {
    let params = PartitionParams::from_n0(n0, alpha).map_err(|e| e.to_string())?;
    let report = count_x(&params, false).map_err(|e| e.to_string())?;
    Ok(to_json(&report))
}

#[derive(Serialize)]
struct TraceOut {
    /// Base points in the Poincaré disk model.
    disk: Vec<[f64; 2]>,
    /// Running time averages of the default bump observable.
    running_average: Vec<f64>,
    average: f64,
}

/// Stable horocycle of length `t_max` from a seeded Haar-random frame.
pub fn horocycle_trace_json(seed: u64, t_max: f64, n_points: usize) -> Result<String, String> {
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(format!("length must be positive, got {t_max}"));
    }
    if n_points == 0 || n_points > MAX_TRACE_POINTS {
        return Err(format!("points must lie in 1..={MAX_TRACE_POINTS}"));
    }
    let group = FuchsianGroup::bolza();
    let f = Observable::default();
    let ds = t_max / n_points as f64;
    let mut p = random_points(&group, 1, seed)[0];
    p = horocycle_flow(&group, &p, 0.5 * ds, Direction::Stable).map_err(|e| e.to_string())?;
    let mut disk = Vec::with_capacity(n_points);
    let mut running_average = Vec::with_capacity(n_points);
    let mut sum = 0.0;
    for k in 0..n_points {
        let z = p.base_point();
        let w = (z - Complex64::i()) / (z + Complex64::i());
        disk.push([w.re, w.im]);
        sum += f.eval_reduced(&p.rep);
        running_average.push(sum / (k + 1) as f64);
        p = horocycle_flow(&group, &p, ds, Direction::Stable).map_err(|e| e.to_string())?;
    }
    Ok(to_json(&TraceOut {
        average: sum / n_points as f64,
        disk,
        running_average,
    }))
}

/// The triadic Cantor set of `level` (capped at 14) as a JSON interval set.
#[wasm_bindgen]
pub fn cantor_set(level: u32) -> String {
    triadic_cantor(level.min(14)).to_json()
}

#[wasm_bindgen]
pub fn porosity(set_json: &str, cantor_level: u32, nu: f64, alpha0: f64) -> Result<String, JsValue> {
    porosity_json(set_json, cantor_level, nu, alpha0).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn word_count(n0: u32, alpha: f64) -> Result<String, JsValue> {
    word_count_json(n0, alpha).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn horocycle_trace(seed: u64, t_max: f64, n_points: usize) -> Result<String, JsValue> {
    horocycle_trace_json(seed, t_max, n_points).map_err(|e| JsValue::from_str(&e))
}
