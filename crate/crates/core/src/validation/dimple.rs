use serde::Serialize;

use crate::model::{GneitingModel, ModelError};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DimpleReport {
    pub has_dimple: bool,
    pub argmax_u: f64,
    pub max_covariance: f64,
    pub covariance_at_zero: f64,
}

/// Scans `u ↦ C(h, u)` over `u_grid` and reports a hole effect when the
/// maximum exceeds `C(h, 0)` by more than `1e-9`.
pub fn detect_dimple(model: &GneitingModel, h: &[f64], u_grid: &[f64]) -> Result<DimpleReport, ModelError> {
    let c0 = model.covariance(h, 0.0)?;
    let (mut argmax_u, mut best) = (0.0, c0);
    for &u in u_grid {
        let c = model.covariance(h, u)?;
        if c > best {
            best = c;
            argmax_u = u;
        }
    }
    Ok(DimpleReport {
        has_dimple: best > c0 + 1e-9,
        argmax_u,
        max_covariance: best,
        covariance_at_zero: c0,
    })
}
