//! The extended Gneiting covariance model
//! `C(h, u) = (γ(u) + 1)^(-k/2) φ(|h|² / (γ(u) + 1))`.

mod mixture;
mod points;
mod variogram;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use mixture::{MixtureKind, MixtureMeasure, WEIGHT_SUM_TOLERANCE};
pub use points::{GridSpec, SpaceTimePointSet};
pub use variogram::{
    classify_variogram, power_density_constant, SamplerStrategy, SpectralDensity, TableId,
    VariogramClass, VariogramFamily, VariogramSpec,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("{field} = {value} is outside {range}")]
    OutOfRange {
        field: String,
        value: f64,
        range: &'static str,
    },
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
    #[error("strategy {strategy} is not available for the {family} variogram")]
    StrategyMismatch {
        strategy: &'static str,
        family: String,
    },
    #[error("expected a {expected}-dimensional lag, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

impl ModelError {
    pub(crate) fn range(field: impl Into<String>, value: f64, range: &'static str) -> Self {
        ModelError::OutOfRange {
            field: field.into(),
            value,
            range,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GneitingModel {
    k: usize,
    mu: MixtureMeasure,
    gamma: VariogramSpec,
}

impl GneitingModel {
    pub fn new(k: usize, mu: MixtureMeasure, gamma: VariogramSpec) -> Result<Self, ModelError> {
        if k == 0 {
            return Err(ModelError::Invalid {
                field: "model.k".into(),
                message: "space dimension must be positive".into(),
            });
        }
        Ok(Self { k, mu, gamma })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn mixture(&self) -> &MixtureMeasure {
        &self.mu
    }

    pub fn variogram(&self) -> &VariogramSpec {
        &self.gamma
    }

    /// `C(h, u)`; `h` must have length `k`.
    pub fn covariance(&self, h: &[f64], u: f64) -> Result<f64, ModelError> {
        if h.len() != self.k {
            return Err(ModelError::DimensionMismatch {
                expected: self.k,
                got: h.len(),
            });
        }
        Ok(self.covariance_radial(h.iter().map(|x| x * x).sum(), u))
    }

    /// `C` as a function of the squared spatial distance.
    pub fn covariance_radial(&self, h_sq: f64, u: f64) -> f64 {
        let g = self.gamma.evaluate(u) + 1.0;
        g.powf(-0.5 * self.k as f64) * self.mu.laplace(h_sq / g)
    }

    /// Purely temporal covariance `C(0, u) = (γ(u) + 1)^(-k/2)`.
    pub fn temporal_covariance(&self, u: f64) -> f64 {
        (self.gamma.evaluate(u) + 1.0).powf(-0.5 * self.k as f64)
    }

    /// `1 - C(h, u)`.
    pub fn space_time_variogram(&self, h: &[f64], u: f64) -> Result<f64, ModelError> {
        Ok(1.0 - self.covariance(h, u)?)
    }
}
