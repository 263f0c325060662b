//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each exported function has a plain Rust counterpart returning
//! `Result<_, String>` so the logic is testable natively.

use cubic_rds::orbit::{basin_grid, iterate};
use cubic_rds::stability::{classify_attractors, format_set, two_point_scan};
use cubic_rds::{FixedPointLabel, OrbitParams, SeedSpec, SimplexPoint, ThetaDistribution};
use wasm_bindgen::prelude::*;

/// Values per point returned by [`basin_values`]: coordinates, then the
/// probabilities of E1, C12, Center and of any other outcome.
pub const BASIN_STRIDE: usize = 7;
/// Values per row returned by [`scan_values`]: θ and the four exponents.
pub const SCAN_STRIDE: usize = 5;

fn parse_dist(law: &str) -> Result<ThetaDistribution, String> {
    law.trim().parse().map_err(|e: cubic_rds::Error| e.to_string())
}

fn params(max_steps: usize, keep_history: bool) -> OrbitParams {
    OrbitParams { max_steps, keep_history, ..OrbitParams::default() }
}

/// Orbit states as flattened `x1, x2, x3` triples, plus the verdict.
pub fn orbit_values(dist: &str, x0: [f64; 3], steps: usize, seed: u64) -> Result<(Vec<f64>, String), String> {
    let d = parse_dist(dist)?;
    let x = SimplexPoint::from_array(x0).map_err(|e| e.to_string())?;
    let r = iterate(&d, &x, SeedSpec::new(seed, 0), &params(steps, true)).map_err(|e| e.to_string())?;
    let mut out: Vec<f64> = r.history.unwrap_or_default().iter().flat_map(|h| h.state.coords()).collect();
    out.extend(r.final_state.coords());
    Ok((out, r.verdict.to_string()))
}

/// Limit-label frequencies over the interior grid of `G1`.
pub fn basin_values(dist: &str, resolution: usize, trials: usize, seed: u64, steps: usize) -> Result<Vec<f64>, String> {
    use FixedPointLabel::{Center, C12, E1};
    let d = parse_dist(dist)?;
    let grid = basin_grid(&d, resolution, trials, seed, &params(steps, false)).map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(grid.len() * BASIN_STRIDE);
    for b in grid {
        let p = [E1, C12, Center].map(|l| b.probability(l));
        out.extend(b.initial.coords());
        out.extend(p);
        out.push(1.0 - p.iter().sum::<f64>());
    }
    Ok(out)
}

/// Exponent rows for the two-point laws `½δ_{θ-offset} + ½δ_{θ+offset}`.
pub fn scan_values(from: f64, to: f64, step: f64, offset: f64) -> Result<Vec<f64>, String> {
    let rows = two_point_scan(from, to, step, offset).map_err(|e| e.to_string())?;
    Ok(rows
        .iter()
        .flat_map(|r| {
            let e = &r.exponents;
            [r.theta, e.e1, e.center, e.saddle_in, e.saddle_out]
        })
        .collect())
}

/// Exponents and attractor sets as display text.
pub fn summary_text(dist: &str) -> Result<String, String> {
    let d = parse_dist(dist)?;
    let r = classify_attractors(&d).map_err(|e| e.to_string())?;
    let (e, s) = (&r.exponents, &r.region_sets);
    Ok(format!(
        "E log 3(1-T) = {:.6}\nE log(1/3+T) = {:.6}\nE log(3T/2) = {:.6}\nE log(2-3T/2) = {:.6}\n\
         int G1: {{{}}}\nM12: {{{}}}\nM23: {{{}}}\nGamma12: {{{}}}",
        e.e1,
        e.center,
        e.saddle_in,
        e.saddle_out,
        format_set(&s.int_g1).replace(';', ", "),
        format_set(&s.m12).replace(';', ", "),
        format_set(&s.m23).replace(';', ", "),
        format_set(&s.gamma12).replace(';', ", "),
    ))
}

#[wasm_bindgen]
pub struct OrbitTrace {
    points: Vec<f64>,
    verdict: String,
}

#[wasm_bindgen]
impl OrbitTrace {
    /// Flattened `x1, x2, x3` triples.
    #[wasm_bindgen(getter)]
    pub fn points(&self) -> Vec<f64> {
        self.points.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn verdict(&self) -> String {
        self.verdict.clone()
    }
}

#[wasm_bindgen]
pub fn trace_orbit(dist: &str, x1: f64, x2: f64, x3: f64, steps: usize, seed: u64) -> Result<OrbitTrace, JsError> {
    let (points, verdict) = orbit_values(dist, [x1, x2, x3], steps, seed).map_err(|e| JsError::new(&e))?;
    Ok(OrbitTrace { points, verdict })
}

#[wasm_bindgen]
pub fn basin_map(dist: &str, resolution: usize, trials: usize, seed: u64, steps: usize) -> Result<Vec<f64>, JsError> {
    basin_values(dist, resolution, trials, seed, steps).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn lyapunov_scan(from: f64, to: f64, step: f64, offset: f64) -> Result<Vec<f64>, JsError> {
    scan_values(from, to, step, offset).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn attractor_summary(dist: &str) -> Result<String, JsError> {
    summary_text(dist).map_err(|e| JsError::new(&e))
}
