//! Simulation of centered space-time Gaussian random fields on ℝᵏ×ℝ whose
//! covariance belongs to the extended Gneiting class
//!
//! ```text
//! C(h, u) = (γ(u) + 1)^(-k/2) φ(|h|² / (γ(u) + 1))
//! ```
//!
//! where `φ` is completely monotone (the Laplace transform of a mixture
//! measure `μ`) and `γ` is a temporal variogram.
//!
//! Two simulation routes are provided. [`spectral`] samples the space-time
//! spectral measure through its conditional factorization (Gaussian spatial
//! frequency, then a temporal frequency conditional on it). [`substitution`]
//! replaces the temporal frequency by an intrinsic Gaussian path with
//! variogram `γ`. Both build a sum of `p` random cosine waves and cost
//! `O(n·p)` for `n` evaluation points.
//!
//! [`validation`] holds the statistical harness (empirical variograms,
//! transform oracles, normality tests, hole-effect detection) and
//! [`cli_io`] the configuration, orchestration and file formats used by the
//! `gneiting` binary.

pub mod cli_io;
pub mod distributions;
pub mod field;
pub mod model;
pub mod spectral;
pub mod substitution;
pub mod validation;

pub use distributions::RngStream;
pub use field::{FieldRealization, Method, Provenance};
pub use model::{
    GneitingModel, GridSpec, MixtureMeasure, SamplerStrategy, SpaceTimePointSet, TableId,
    VariogramFamily, VariogramSpec,
};
pub use spectral::SpectralEnsemble;
pub use substitution::SubstitutionEnsemble;
