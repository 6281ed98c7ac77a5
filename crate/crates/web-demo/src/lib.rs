//! Browser bindings: simulate a space-time slice, scan a covariance for the
//! hole effect, and run a characteristic-function check.

use std::sync::Arc;

use wasm_bindgen::prelude::*;

use gneiting::distributions::RngStream;
use gneiting::model::{GneitingModel, GridSpec, MixtureMeasure, SpaceTimePointSet, VariogramSpec};
use gneiting::spectral::{build_spectral_ensemble, TemporalSampler};
use gneiting::substitution::build_substitution_ensemble;
use gneiting::validation::{detect_dimple, transform_oracle, Transform};

/// Builds the demo model: `k = 2`, `φ(t) = e^{-r t}` and one of the named
/// temporal variograms with its usual parameter.
pub fn demo_model(family: &str, param: f64, r: f64) -> Result<GneitingModel, String> {
    let gamma = demo_variogram(family, param)?;
    let mu = MixtureMeasure::dirac(r).map_err(|e| e.to_string())?;
    GneitingModel::new(2, mu, gamma).map_err(|e| e.to_string())
}

fn demo_variogram(family: &str, param: f64) -> Result<VariogramSpec, String> {
    match family {
        "linear" => VariogramSpec::linear(param),
        "logarithmic" => VariogramSpec::logarithmic(param),
        "cauchy_class" => VariogramSpec::cauchy_class(1.0, 1.0, param),
        "fractional_power" => VariogramSpec::fractional_power(param),
        other => return Err(format!("unknown family {other:?}")),
    }
    .map_err(|e| e.to_string())
}

/// Field values on an `nx × ny` unit grid at times `0, dt, …, (nt-1)·dt`,
/// x fastest, time slowest.
#[allow(clippy::too_many_arguments)]
pub fn simulate(
    family: &str,
    param: f64,
    r: f64,
    substitution: bool,
    p: usize,
    seed: u64,
    nx: usize,
    ny: usize,
    nt: usize,
    dt: f64,
) -> Result<Vec<f64>, String> {
    let model = demo_model(family, param, r)?;
    let grid = GridSpec::new(vec![0.0; 3], vec![1.0, 1.0, dt], vec![nx, ny, nt]).map_err(|e| e.to_string())?;
    let times = grid.times();
    let points = Arc::new(SpaceTimePointSet::from_grid(grid));
    let field = if substitution {
        build_substitution_ensemble(&model, &times, p, seed)
            .and_then(|e| e.evaluate(points))
            .map_err(|e| e.to_string())?
    } else {
        build_spectral_ensemble(&model, p, seed)
            .and_then(|e| e.evaluate(points))
            .map_err(|e| e.to_string())?
    };
    Ok(field.values)
}

/// `C(h, u)` for `u = 0, step, …` up to `u_max`, followed by two summary
/// values: 1 if the curve has a hole effect, else 0, and the maximizing `u`.
pub fn covariance_curve(
    family: &str,
    param: f64,
    r: f64,
    hx: f64,
    hy: f64,
    u_max: f64,
    step: f64,
) -> Result<Vec<f64>, String> {
    if !(step > 0.0 && u_max >= 0.0) {
        return Err("step must be positive and u_max nonnegative".into());
    }
    let model = demo_model(family, param, r)?;
    let n = (u_max / step).round() as usize;
    let grid: Vec<f64> = (0..=n).map(|i| i as f64 * step).collect();
    let h = [hx, hy];
    let mut out: Vec<f64> = grid
        .iter()
        .map(|&u| model.covariance(&h, u))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let d = detect_dimple(&model, &h, &grid).map_err(|e| e.to_string())?;
    out.push(if d.has_dimple { 1.0 } else { 0.0 });
    out.push(d.argmax_u);
    Ok(out)
}

/// Empirical vs. analytic characteristic function of the conditional
/// temporal frequency at `u = 0.25 … 8`. Returns triples
/// `(u, empirical real part, exp(-λγ(u)))` followed by the tolerance.
pub fn cf_check(family: &str, param: f64, lambda: f64, n: usize, seed: u64) -> Result<Vec<f64>, String> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err("lambda must be nonnegative".into());
    }
    let spec = demo_variogram(family, param)?;
    let sampler = TemporalSampler::new(&spec, 0.01).map_err(|e| e.to_string())?;
    let mut rng = RngStream::new(seed, 0);
    let draws: Vec<f64> = (0..n.max(1)).map(|_| sampler.sample(lambda, &mut rng)).collect();
    let us = [0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 8.0];
    let mut out = vec![];
    for u in us {
        let re = draws.iter().map(|x| (u * x).cos()).sum::<f64>() / draws.len() as f64;
        out.extend([u, re, (-lambda * spec.evaluate(u)).exp()]);
    }
    let mut it = draws.iter();
    let report = transform_oracle(
        || *it.next().unwrap_or(&0.0),
        |u| (-lambda * spec.evaluate(u)).exp(),
        Transform::Characteristic,
        &us,
        draws.len(),
    );
    out.push(report.tolerance);
    Ok(out)
}

#[wasm_bindgen(js_name = simulate)]
#[allow(clippy::too_many_arguments)]
pub fn simulate_js(
    family: &str,
    param: f64,
    r: f64,
    substitution: bool,
    p: usize,
    seed: u64,
    nx: usize,
    ny: usize,
    nt: usize,
    dt: f64,
) -> Result<Vec<f64>, JsError> {
    simulate(family, param, r, substitution, p, seed, nx, ny, nt, dt).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = covarianceCurve)]
pub fn covariance_curve_js(
    family: &str,
    param: f64,
    r: f64,
    hx: f64,
    hy: f64,
    u_max: f64,
    step: f64,
) -> Result<Vec<f64>, JsError> {
    covariance_curve(family, param, r, hx, hy, u_max, step).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = cfCheck)]
pub fn cf_check_js(family: &str, param: f64, lambda: f64, n: usize, seed: u64) -> Result<Vec<f64>, JsError> {
    cf_check(family, param, lambda, n, seed).map_err(|e| JsError::new(&e))
}
