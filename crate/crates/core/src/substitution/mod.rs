//! Substitution method: cosine waves whose temporal phase is driven by an
//! intrinsic Gaussian path `W` with variogram `γ`,
//!
//! ```text
//! Z(x, t) = Σⱼ ampⱼ/√p · cos(√(2Rⱼ)⟨Ω̃ⱼ, x⟩ + |Ω̃ⱼ|/√2 · Wⱼ(t) + Φⱼ)
//! ```
//!
//! `W` is only known at the simulated time instants.

mod path;

use std::sync::Arc;

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use thiserror::Error;

use crate::distributions::{sample_amplitude, sample_gaussian_vector, sample_phase, RngStream};
use crate::field::{sum_waves, FieldRealization, Method, Provenance, TimeSlots};
use crate::model::{GneitingModel, SpaceTimePointSet};

pub use path::{simulate_intrinsic_path, IntrinsicFactor, IntrinsicPath, DEFAULT_MAX_INSTANTS, JITTER_LADDER};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SubstitutionError {
    #[error("time instants must be finite and distinct")]
    InvalidInstants,
    #[error("{n} time instants exceed the dense factorization cap of {cap}")]
    TooManyInstants { n: usize, cap: usize },
    #[error("increment covariance is not positive definite even with jitter {jitter:e}")]
    Factorization { jitter: f64 },
    #[error("time {0} was not simulated")]
    MissingInstant(f64),
    #[error("ensemble has dimension {expected}, points have {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("p must be at least 1")]
    EmptyEnsemble,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubstitutionComponent {
    pub r: f64,
    pub omega_tilde: Vec<f64>,
    pub phi: f64,
    pub amp: f64,
    pub path: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct SubstitutionEnsemble {
    model: GneitingModel,
    seed: u64,
    realization: u32,
    instants: Vec<f64>,
    components: Vec<SubstitutionComponent>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SubstitutionOptions {
    pub realization: u32,
    pub max_instants: usize,
}

impl Default for SubstitutionOptions {
    fn default() -> Self {
        Self {
            realization: 0,
            max_instants: DEFAULT_MAX_INSTANTS,
        }
    }
}

pub fn build_substitution_ensemble(
    model: &GneitingModel,
    instants: &[f64],
    p: usize,
    seed: u64,
) -> Result<SubstitutionEnsemble, SubstitutionError> {
    build_substitution_ensemble_with(model, instants, p, seed, SubstitutionOptions::default())
}

/// Component `j` (1-based) draws `R`, `Ω̃`, `Φ`, `U` and then its own path
/// from stream `(realization << 32) | j`; the factorization is shared.
pub fn build_substitution_ensemble_with(
    model: &GneitingModel,
    instants: &[f64],
    p: usize,
    seed: u64,
    opts: SubstitutionOptions,
) -> Result<SubstitutionEnsemble, SubstitutionError> {
    if p == 0 {
        return Err(SubstitutionError::EmptyEnsemble);
    }
    let factor = IntrinsicFactor::with_cap(model.variogram(), instants, opts.max_instants)?;
    let k = model.k();
    let build = |j: usize| {
        let mut rng = RngStream::component(seed, opts.realization, j as u32);
        let r = model.mixture().sample(&mut rng);
        let omega_tilde = sample_gaussian_vector(k, 1.0, &mut rng);
        let phi = sample_phase(&mut rng);
        let amp = sample_amplitude(&mut rng);
        let path = factor.sample(&mut rng).values;
        SubstitutionComponent {
            r,
            omega_tilde,
            phi,
            amp,
            path,
        }
    };
    #[cfg(feature = "parallel")]
    let components = (1..=p).into_par_iter().map(build).collect();
    #[cfg(not(feature = "parallel"))]
    let components = (1..=p).map(build).collect();
    Ok(SubstitutionEnsemble {
        model: model.clone(),
        seed,
        realization: opts.realization,
        instants: factor.instants().to_vec(),
        components,
    })
}

impl SubstitutionEnsemble {
    /// Ensemble from explicit components (for tests and demos).
    pub fn from_components(
        model: &GneitingModel,
        instants: Vec<f64>,
        components: Vec<SubstitutionComponent>,
    ) -> Result<Self, SubstitutionError> {
        if components.is_empty() {
            return Err(SubstitutionError::EmptyEnsemble);
        }
        let instants = path::validate_instants(&instants)?;
        for c in &components {
            if c.omega_tilde.len() != model.k() {
                return Err(SubstitutionError::DimensionMismatch {
                    expected: model.k(),
                    got: c.omega_tilde.len(),
                });
            }
            if c.path.len() != instants.len() {
                return Err(SubstitutionError::InvalidInstants);
            }
        }
        Ok(Self {
            model: model.clone(),
            seed: 0,
            realization: 0,
            instants,
            components,
        })
    }

    pub fn p(&self) -> usize {
        self.components.len()
    }

    pub fn k(&self) -> usize {
        self.model.k()
    }

    /// Sorted simulated instants; `components()[j].path[i]` is `Wⱼ(instants[i])`.
    pub fn instants(&self) -> &[f64] {
        &self.instants
    }

    pub fn components(&self) -> &[SubstitutionComponent] {
        &self.components
    }

    pub fn model(&self) -> &GneitingModel {
        &self.model
    }

    pub fn evaluate(
        &self,
        points: Arc<SpaceTimePointSet>,
    ) -> Result<FieldRealization, SubstitutionError> {
        evaluate_substitution(self, points)
    }
}

pub fn evaluate_substitution(
    ensemble: &SubstitutionEnsemble,
    points: Arc<SpaceTimePointSet>,
) -> Result<FieldRealization, SubstitutionError> {
    if points.k() != ensemble.k() {
        return Err(SubstitutionError::DimensionMismatch {
            expected: ensemble.k(),
            got: points.k(),
        });
    }
    let slots = TimeSlots::new(&points);
    let inst: Vec<usize> = slots
        .times
        .iter()
        .map(|t| {
            ensemble
                .instants
                .binary_search_by(|s| s.total_cmp(t))
                .map_err(|_| SubstitutionError::MissingInstant(*t))
        })
        .collect::<Result<_, _>>()?;
    let norm = 1.0 / (ensemble.p() as f64).sqrt();
    let comps = &ensemble.components;
    let freqs: Vec<f64> = comps
        .iter()
        .flat_map(|c| {
            let s = (2.0 * c.r).sqrt();
            c.omega_tilde.iter().map(move |w| s * w)
        })
        .collect();
    let amps: Vec<f64> = comps.iter().map(|c| c.amp * norm).collect();
    let speeds: Vec<f64> = comps
        .iter()
        .map(|c| c.omega_tilde.iter().map(|w| w * w).sum::<f64>().sqrt() / 2f64.sqrt())
        .collect();
    let values = sum_waves(&points, &slots, &freqs, &amps, |j, m| {
        speeds[j] * comps[j].path[inst[m]] + comps[j].phi
    });
    Ok(FieldRealization {
        points,
        values,
        provenance: Provenance::new(
            &ensemble.model,
            Method::Substitution,
            ensemble.p(),
            ensemble.seed,
            ensemble.realization,
        ),
    })
}
