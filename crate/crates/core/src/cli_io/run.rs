use std::fs;
use std::io;
use std::path::PathBuf;
use std::sync::Arc;

use serde::Serialize;

use super::{write_field, OutputFormat, RunConfig, RunError};
use crate::field::{model_hash, FieldRealization, Method};
use crate::spectral::{build_spectral_ensemble_with, SpectralOptions};
use crate::substitution::{build_substitution_ensemble_with, SubstitutionOptions};
use crate::validation::{
    compare_variograms, empirical_variogram, write_variogram_csv, write_variogram_text,
    VariogramMode, VariogramRow,
};

/// Listing of everything a run wrote.
#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    pub version: String,
    pub method: Method,
    pub seed: u64,
    pub p: usize,
    pub realizations: u32,
    pub model_hash: String,
    pub format: String,
    pub files: Vec<String>,
}

/// Simulates realization `r` of the configured run.
pub fn simulate_realization(config: &RunConfig, r: u32) -> Result<FieldRealization, RunError> {
    let points = Arc::new(config.points.clone());
    simulate_on(config, r, points)
}

fn simulate_on(
    config: &RunConfig,
    r: u32,
    points: Arc<crate::model::SpaceTimePointSet>,
) -> Result<FieldRealization, RunError> {
    match config.method {
        Method::Spectral => {
            let opts = SpectralOptions {
                realization: r,
                eps: config.eps,
                strategy: None,
            };
            let e = build_spectral_ensemble_with(&config.model, config.p, config.seed, opts)
                .map_err(|e| RunError::Numerical(e.to_string()))?;
            e.evaluate(points).map_err(|e| RunError::Numerical(e.to_string()))
        }
        Method::Substitution => {
            let instants = config
                .instants
                .as_deref()
                .ok_or_else(|| RunError::Numerical("substitution needs time instants".into()))?;
            let opts = SubstitutionOptions {
                realization: r,
                ..SubstitutionOptions::default()
            };
            let e = build_substitution_ensemble_with(&config.model, instants, config.p, config.seed, opts)
                .map_err(|e| RunError::Numerical(e.to_string()))?;
            e.evaluate(points).map_err(|e| RunError::Numerical(e.to_string()))
        }
    }
}

fn io_err(path: &std::path::Path, e: io::Error) -> RunError {
    RunError::Io(format!("{}: {e}", path.display()))
}

/// Simulates every realization, writes one field file per realization and
/// a `manifest.json`. Outputs depend only on the configuration and seed.
pub fn run(config: &RunConfig) -> Result<Manifest, RunError> {
    fs::create_dir_all(&config.out).map_err(|e| io_err(&config.out, e))?;
    let ext = match config.format {
        OutputFormat::Csv => "csv",
        OutputFormat::Raw => "bin",
    };
    let mut files = vec![];
    for r in 0..config.realizations {
        let field = simulate_realization(config, r)?;
        let path = config.out.join(format!("field_{r:04}.{ext}"));
        for f in write_field(&field, config.format, &path).map_err(|e| io_err(&path, e))? {
            files.push(f.file_name().unwrap().to_string_lossy().into_owned());
        }
    }
    let manifest = Manifest {
        version: env!("CARGO_PKG_VERSION").into(),
        method: config.method,
        seed: config.seed,
        p: config.p,
        realizations: config.realizations,
        model_hash: model_hash(&config.model),
        format: config.format.name().into(),
        files,
    };
    let path = config.out.join("manifest.json");
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    fs::write(&path, text).map_err(|e| io_err(&path, e))?;
    Ok(manifest)
}

/// One curve of the validation protocol.
#[derive(Clone, Debug, Serialize)]
pub struct ValidationCurve {
    pub name: String,
    pub rows: Vec<VariogramRow>,
}

impl ValidationCurve {
    pub fn pass(&self) -> bool {
        self.rows.iter().all(|r| r.within_band)
    }
}

/// Mean empirical variograms over all realizations against `1 - C(h, u)`:
/// spatial curves at each configured time lag and temporal curves at each
/// configured spatial lag. Writes csv and text reports when `out` is set.
pub fn validate(config: &RunConfig, out: Option<&PathBuf>) -> Result<Vec<ValidationCurve>, RunError> {
    let v = &config.validate;
    let mut modes: Vec<(String, VariogramMode)> = vec![];
    for &u in &v.u_values {
        modes.push((format!("spatial_u{u}"), VariogramMode::SpatialAtFixedTime { u }));
    }
    for h in &v.h_values {
        let name = h.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("_");
        modes.push((format!("temporal_h{name}"), VariogramMode::TemporalAtFixedSpace { h: h.clone() }));
    }
    let mut per_mode: Vec<Vec<_>> = vec![vec![]; modes.len()];
    for r in 0..config.realizations {
        let field = simulate_realization(config, r)?;
        for (i, (_, mode)) in modes.iter().enumerate() {
            let lags = match mode {
                VariogramMode::SpatialAtFixedTime { .. } => &v.spatial_lags,
                VariogramMode::TemporalAtFixedSpace { .. } => &v.temporal_lags,
            };
            let ev = empirical_variogram(&field, mode, lags).map_err(|e| RunError::Config(e.to_string()))?;
            per_mode[i].push(ev);
        }
    }
    let k = config.model.k();
    let mut curves = vec![];
    for ((name, mode), evs) in modes.into_iter().zip(per_mode) {
        let model = &config.model;
        let rows = match &mode {
            VariogramMode::SpatialAtFixedTime { u } => compare_variograms(
                &evs,
                |l| {
                    let mut h = vec![0.0; k];
                    h[0] = l;
                    1.0 - model.covariance(&h, *u).expect("dimension")
                },
                v.band,
            ),
            VariogramMode::TemporalAtFixedSpace { h } => {
                compare_variograms(&evs, |u| 1.0 - model.covariance(h, u).expect("dimension"), v.band)
            }
        }
        .map_err(|e| RunError::Numerical(e.to_string()))?;
        curves.push(ValidationCurve { name, rows });
    }
    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        let mut summary = vec![];
        for c in &curves {
            let path = dir.join(format!("variogram_{}.csv", c.name));
            let f = fs::File::create(&path).map_err(|e| io_err(&path, e))?;
            write_variogram_csv(&c.rows, v.band, io::BufWriter::new(f)).map_err(|e| io_err(&path, e))?;
            write_variogram_text(&c.name, &c.rows, &mut summary).expect("in-memory write");
        }
        let path = dir.join("validation.txt");
        fs::write(&path, summary).map_err(|e| io_err(&path, e))?;
    }
    Ok(curves)
}
