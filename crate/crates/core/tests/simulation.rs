use std::sync::Arc;
use std::time::Instant;

use gneiting::model::{GneitingModel, GridSpec, MixtureMeasure, SpaceTimePointSet, VariogramSpec};
use gneiting::spectral::{build_spectral_ensemble, build_spectral_ensemble_with, SpectralOptions};
use gneiting::substitution::{
    build_substitution_ensemble, build_substitution_ensemble_with, SubstitutionError,
    SubstitutionOptions,
};
use gneiting::validation::{empirical_variogram, VariogramMode};

fn model(gamma: VariogramSpec) -> GneitingModel {
    GneitingModel::new(2, MixtureMeasure::dirac(0.01).unwrap(), gamma).unwrap()
}

fn six_instants() -> Vec<f64> {
    (0..6).map(|i| i as f64 * 0.2).collect()
}

#[test]
fn spectral_build_within_budget() {
    let m = model(VariogramSpec::linear(1.0).unwrap());
    let t = Instant::now();
    let e = build_spectral_ensemble(&m, 5000, 1).unwrap();
    let dt = t.elapsed().as_secs_f64();
    assert_eq!(e.p(), 5000);
    assert!(dt <= 1.0, "build took {dt}s");
}

#[test]
fn substitution_build_within_budget() {
    let m = model(VariogramSpec::cauchy_class(1.0, 1.0, 0.5).unwrap());
    let t = Instant::now();
    let e = build_substitution_ensemble(&m, &six_instants(), 5000, 1).unwrap();
    let dt = t.elapsed().as_secs_f64();
    assert_eq!(e.p(), 5000);
    assert!(e.components().iter().all(|c| c.path.len() == 6));
    assert!(dt <= 5.0, "build took {dt}s");
}

#[test]
fn substitution_is_reproducible_and_rejects_missing_instants() {
    let m = model(VariogramSpec::cauchy_class(1.0, 1.0, 0.5).unwrap());
    let a = build_substitution_ensemble(&m, &six_instants(), 50, 9).unwrap();
    let b = build_substitution_ensemble(&m, &six_instants(), 50, 9).unwrap();
    assert_eq!(a.components(), b.components());
    let pts = Arc::new(SpaceTimePointSet::from_points(2, vec![0.0, 0.0], vec![0.3]).unwrap());
    assert!(matches!(a.evaluate(pts), Err(SubstitutionError::MissingInstant(t)) if t == 0.3));
}

/// At t = 0 the substitution field is a purely spatial spectral field:
/// C((10,0),0) = e^{-1}.
#[test]
fn substitution_spatial_covariance_at_origin_time() {
    let m = model(VariogramSpec::cauchy_class(1.0, 1.0, 0.5).unwrap());
    let pts = Arc::new(
        SpaceTimePointSet::from_points(2, vec![0.0, 0.0, 10.0, 0.0], vec![0.0, 0.0]).unwrap(),
    );
    let n = 200;
    let prods: Vec<f64> = (0..n)
        .map(|r| {
            let opts = SubstitutionOptions {
                realization: r,
                ..Default::default()
            };
            let f = build_substitution_ensemble_with(&m, &[0.0], 2000, 44, opts)
                .unwrap()
                .evaluate(pts.clone())
                .unwrap();
            f.values[0] * f.values[1]
        })
        .collect();
    let mean = prods.iter().sum::<f64>() / n as f64;
    let c = (-1f64).exp();
    let se = ((1.0 + c * c) / n as f64).sqrt();
    assert!((mean - c).abs() < 3.0 * se, "{mean} vs {c}");
}

/// Across-realization spread of the temporal variogram: spectral ≥ substitution
/// at most lags.
#[test]
fn spectral_fluctuates_more_than_substitution() {
    let m = model(VariogramSpec::cauchy_class(1.0, 1.0, 0.5).unwrap());
    let g = GridSpec::new(vec![0.0; 3], vec![1.0, 1.0, 0.2], vec![30, 30, 21]).unwrap();
    let pts = Arc::new(SpaceTimePointSet::from_grid(g.clone()));
    let instants = g.times();
    let lags: Vec<f64> = (1..=20).map(|i| i as f64 * 0.2).collect();
    let mode = VariogramMode::TemporalAtFixedSpace { h: vec![0.0, 0.0] };
    let reps = 30;
    let mut spec = vec![];
    let mut sub = vec![];
    for r in 0..reps {
        let f = build_spectral_ensemble_with(
            &m,
            500,
            12,
            SpectralOptions {
                realization: r,
                ..Default::default()
            },
        )
        .unwrap()
        .evaluate(pts.clone())
        .unwrap();
        spec.push(empirical_variogram(&f, &mode, &lags).unwrap().values);
        let f = build_substitution_ensemble_with(
            &m,
            &instants,
            500,
            13,
            SubstitutionOptions {
                realization: r,
                ..Default::default()
            },
        )
        .unwrap()
        .evaluate(pts.clone())
        .unwrap();
        sub.push(empirical_variogram(&f, &mode, &lags).unwrap().values);
    }
    let var = |rows: &[Vec<f64>], i: usize| {
        let m = rows.iter().map(|v| v[i]).sum::<f64>() / rows.len() as f64;
        rows.iter().map(|v| (v[i] - m).powi(2)).sum::<f64>()
    };
    let larger = (0..lags.len()).filter(|&i| var(&spec, i) >= var(&sub, i)).count();
    assert!(larger * 10 > lags.len() * 6, "{larger}/{}", lags.len());
}
