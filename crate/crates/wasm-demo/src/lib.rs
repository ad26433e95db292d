//! Browser bindings for the `kdv5` solver.
//!
//! Each operation has a plain Rust form (tested natively) and a thin
//! `#[wasm_bindgen]` wrapper that reports errors as strings.

use kdv5::data::gaussian;
use kdv5::evolution::Integrator;
use kdv5::weights::WeightProfile;
use kdv5::{Grid, Model, Result};
use wasm_bindgen::prelude::*;

/// Sample points of the box `[−L, L)` with `L = half_width_pi · π`.
pub fn grid_points(half_width_pi: f64, n: usize) -> Result<Vec<f64>> {
    Ok(Grid::new(half_width_pi * std::f64::consts::PI, n)?.points().to_vec())
}

/// Gaussian data moved by the free group for time `t`.
pub fn free_wave(half_width_pi: f64, n: usize, amplitude: f64, width: f64, t: f64) -> Result<Vec<f64>> {
    let grid = Grid::new(half_width_pi * std::f64::consts::PI, n)?;
    let u0 = gaussian(&grid, amplitude, width, 0.0)?;
    Ok(u0.free_propagate(t)?.into_values())
}

/// Nonlinear evolution of Gaussian data; `frames` snapshots (including
/// `t = 0`) concatenated into one flat array of `frames · n` samples.
pub fn evolve(
    half_width_pi: f64,
    n: usize,
    k: u32,
    amplitude: f64,
    width: f64,
    t_final: f64,
    frames: usize,
) -> Result<Vec<f64>> {
    if frames < 2 {
        return Err(kdv5::Error::InvalidArgument("need at least two frames".into()));
    }
    let grid = Grid::new(half_width_pi * std::f64::consts::PI, n)?;
    let u0 = gaussian(&grid, amplitude, width, 0.0)?;
    let intervals = frames - 1;
    let steps_per_frame = ((t_final / intervals as f64) / 0.01).ceil().max(1.0) as usize;
    let dt = t_final / (intervals * steps_per_frame) as f64;
    let traj = Integrator::new(Model::new(k)?).save_every(steps_per_frame).run(&u0, t_final, dt)?;
    Ok(traj.fields().iter().flat_map(|f| f.values().iter().copied()).collect())
}

/// Truncated weight `w_N` sampled on the box.
pub fn weight_profile(half_width_pi: f64, n: usize, truncation: u32) -> Result<Vec<f64>> {
    let grid = Grid::new(half_width_pi * std::f64::consts::PI, n)?;
    Ok(WeightProfile::truncated(truncation)?.sample(&grid).values())
}

fn js<T>(r: Result<T>) -> std::result::Result<T, JsValue> {
    r.map_err(|e| JsValue::from_str(&e.to_string()))
}

#[wasm_bindgen(js_name = gridPoints)]
pub fn grid_points_js(half_width_pi: f64, n: usize) -> std::result::Result<Vec<f64>, JsValue> {
    js(grid_points(half_width_pi, n))
}

#[wasm_bindgen(js_name = freeWave)]
pub fn free_wave_js(
    half_width_pi: f64,
    n: usize,
    amplitude: f64,
    width: f64,
    t: f64,
) -> std::result::Result<Vec<f64>, JsValue> {
    js(free_wave(half_width_pi, n, amplitude, width, t))
}

#[wasm_bindgen(js_name = evolve)]
pub fn evolve_js(
    half_width_pi: f64,
    n: usize,
    k: u32,
    amplitude: f64,
    width: f64,
    t_final: f64,
    frames: usize,
) -> std::result::Result<Vec<f64>, JsValue> {
    js(evolve(half_width_pi, n, k, amplitude, width, t_final, frames))
}

#[wasm_bindgen(js_name = weightProfile)]
pub fn weight_profile_js(half_width_pi: f64, n: usize, truncation: u32) -> std::result::Result<Vec<f64>, JsValue> {
    js(weight_profile(half_width_pi, n, truncation))
}
