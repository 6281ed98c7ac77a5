//! Statistical checks: empirical variograms against theory, Monte-Carlo
//! transform oracles, normality tests and hole-effect detection.

mod dimple;
mod normality;
mod oracle;
mod report;
mod variogram;

use thiserror::Error;

pub use dimple::{detect_dimple, DimpleReport};
pub use normality::{
    anderson_darling, kolmogorov_sf, ks_statistic, ks_two_sample, normality_report,
    NormalityReport, TwoSampleReport, AD_CRITICAL_1PCT,
};
pub use oracle::{transform_oracle, OracleReport, Transform};
pub use report::{compare_variograms, write_variogram_csv, write_variogram_text, VariogramRow};
pub use variogram::{empirical_variogram, EmpiricalVariogram, VariogramMode};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ValidationError {
    #[error("empirical variograms need a field on a regular grid")]
    NotAGrid,
    #[error("lag {0:?} is not a whole number of grid steps")]
    LagNotRepresentable(Vec<f64>),
    #[error("lag {0:?} leaves no pairs inside the grid")]
    NoPairs(Vec<f64>),
    #[error("expected a {expected}-dimensional lag, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("cannot combine variograms over different lags")]
    IncompatibleLags,
    #[error("no input")]
    Empty,
}
