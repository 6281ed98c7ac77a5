//! Continuous spectral method: `p` cosine waves whose space-time frequencies
//! are drawn from the spectral measure of the Gneiting covariance.
//!
//! A frequency is drawn in three steps: `r ~ μ`, then `ω ~ N(0, 2r·Iₖ)`,
//! then the temporal frequency `τ` from the law with characteristic function
//! `exp(-λγ(u))`, `λ = |ω|²/(4r)`.

mod shot_noise;

use std::sync::Arc;

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use thiserror::Error;

use crate::distributions::{
    gamma_unchecked, sample_amplitude, sample_cauchy, sample_gaussian, sample_gaussian_vector,
    sample_phase, symmetric_stable_unchecked, tilted_stable_unchecked, RngStream,
};
use crate::field::{sum_waves, FieldRealization, Method, Provenance, TimeSlots};
use crate::model::{
    GneitingModel, SamplerStrategy, SpaceTimePointSet, TableId, VariogramFamily, VariogramSpec,
};

pub use shot_noise::{log_shot_noise_truncated, GenericShotNoise, MAX_MEAN_JUMPS};

/// Default truncation level of the shot-noise series.
pub const DEFAULT_EPS: f64 = 0.01;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("the mixture measure has an atom at zero; use the substitution method")]
    AtomAtZero,
    #[error("spatial frequency needs r > 0, got {0}")]
    NonPositiveScale(f64),
    #[error("strategy {strategy} is not available for the {family} variogram")]
    StrategyMismatch {
        strategy: &'static str,
        family: String,
    },
    #[error("the {0} variogram has no spectral density to sample from")]
    MissingDensity(String),
    #[error("ensemble has dimension {expected}, points have {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("p must be at least 1")]
    EmptyEnsemble,
    #[error("truncation eps = {0} is outside (0, 1)")]
    InvalidEps(f64),
}

/// Strategy and intensity `λ = |ω|²/(4r)` of the conditional temporal law.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConditionalTemporalLaw {
    pub strategy: SamplerStrategy,
    pub lambda: f64,
}

impl ConditionalTemporalLaw {
    pub fn new(strategy: SamplerStrategy, omega: &[f64], r: f64) -> Self {
        let sq: f64 = omega.iter().map(|w| w * w).sum();
        Self {
            strategy,
            lambda: sq / (4.0 * r),
        }
    }
}

/// Temporal-frequency sampler prepared once per variogram; tabulated
/// strategies build their tables here.
#[derive(Clone, Debug)]
pub struct TemporalSampler {
    kind: SamplerKind,
}

#[derive(Clone, Debug)]
enum SamplerKind {
    Cauchy { b: f64 },
    GammaMixture { a: f64 },
    Stable { a: f64, alpha: f64, beta: f64 },
    LogShotNoise { a: f64, eps: f64 },
    Generic(Arc<GenericShotNoise>),
    BoundedCauchy { mass: f64, jump_scale: f64 },
}

impl TemporalSampler {
    /// Prepares the sampler for `spec`'s strategy.
    pub fn new(spec: &VariogramSpec, eps: f64) -> Result<Self, SpectralError> {
        Self::with_strategy(spec, spec.strategy(), eps)
    }

    pub fn with_strategy(
        spec: &VariogramSpec,
        strategy: SamplerStrategy,
        eps: f64,
    ) -> Result<Self, SpectralError> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(SpectralError::InvalidEps(eps));
        }
        let mismatch = || SpectralError::StrategyMismatch {
            strategy: strategy.name(),
            family: spec.family_name(),
        };
        if !spec.supported_strategies().contains(&strategy) {
            return Err(mismatch());
        }
        let kind = match (strategy, spec.family()) {
            (SamplerStrategy::DirectCauchy, VariogramFamily::Linear { b }) => {
                SamplerKind::Cauchy { b: *b }
            }
            (SamplerStrategy::GammaMixture, VariogramFamily::Logarithmic { a }) => {
                SamplerKind::GammaMixture { a: *a }
            }
            (SamplerStrategy::StableMixture, VariogramFamily::CauchyClass { a, alpha, beta }) => {
                SamplerKind::Stable {
                    a: *a,
                    alpha: *alpha,
                    beta: *beta,
                }
            }
            (SamplerStrategy::StableMixture, VariogramFamily::FractionalPower { alpha }) => {
                SamplerKind::Stable {
                    a: 1.0,
                    alpha: *alpha,
                    beta: 1.0,
                }
            }
            (SamplerStrategy::ShotNoiseGeneric, VariogramFamily::Logarithmic { a }) => {
                SamplerKind::LogShotNoise { a: *a, eps }
            }
            (SamplerStrategy::ShotNoiseGeneric, _) => {
                let density = spec
                    .spectral_density()
                    .ok_or_else(|| SpectralError::MissingDensity(spec.family_name()))?;
                SamplerKind::Generic(Arc::new(GenericShotNoise::new(&density)))
            }
            (
                SamplerStrategy::CompoundPoisson,
                VariogramFamily::TableEntry {
                    id: TableId::BoundedExponential,
                    scale,
                    weight,
                    ..
                },
            ) => SamplerKind::BoundedCauchy {
                mass: *weight,
                jump_scale: 1.0 / scale,
            },
            _ => return Err(mismatch()),
        };
        Ok(Self { kind })
    }

    /// Draws `τ` with characteristic function `exp(-λγ(u))`; 0 when `λ = 0`.
    pub fn sample<R: rand::Rng + ?Sized>(&self, lambda: f64, rng: &mut R) -> f64 {
        if lambda <= 0.0 {
            return 0.0;
        }
        match &self.kind {
            SamplerKind::Cauchy { b } => sample_cauchy(lambda * b, rng),
            SamplerKind::GammaMixture { a } => {
                let a2 = a * a;
                let x = gamma_unchecked(lambda / a2.ln(), a2, rng);
                sample_gaussian(1.0, rng) * (2.0 * x).sqrt()
            }
            SamplerKind::Stable { a, alpha, beta } => {
                let tilt = lambda.powf(1.0 / beta);
                let s = tilted_stable_unchecked(*beta, tilt, rng);
                let t = symmetric_stable_unchecked(*alpha, rng);
                t * (s * a * tilt).powf(1.0 / alpha)
            }
            SamplerKind::LogShotNoise { a, eps } => {
                shot_noise::sample_log_shot_noise(*a, lambda, *eps, rng)
            }
            SamplerKind::Generic(g) => g.sample(lambda, rng),
            SamplerKind::BoundedCauchy { mass, jump_scale } => {
                crate::distributions::sample_compound_poisson(
                    lambda * mass,
                    |rng| sample_cauchy(*jump_scale, rng),
                    rng,
                )
            }
        }
    }
}

/// `ω ~ N(0, 2r·Iₖ)`.
pub fn sample_spatial_frequency<R: rand::Rng + ?Sized>(
    r: f64,
    k: usize,
    rng: &mut R,
) -> Result<Vec<f64>, SpectralError> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(SpectralError::NonPositiveScale(r));
    }
    Ok(sample_gaussian_vector(k, 2.0 * r, rng))
}

/// One-off draw of the conditional temporal frequency. Tabulated strategies
/// rebuild their tables on every call; prefer [`TemporalSampler`] in loops.
pub fn sample_temporal_frequency<R: rand::Rng + ?Sized>(
    law: ConditionalTemporalLaw,
    spec: &VariogramSpec,
    rng: &mut R,
) -> Result<f64, SpectralError> {
    if law.lambda <= 0.0 {
        return Ok(0.0);
    }
    let sampler = TemporalSampler::with_strategy(spec, law.strategy, DEFAULT_EPS)?;
    Ok(sampler.sample(law.lambda, rng))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralComponent {
    pub omega: Vec<f64>,
    pub tau: f64,
    pub phi: f64,
    pub amp: f64,
}

#[derive(Clone, Debug)]
pub struct SpectralEnsemble {
    model: GneitingModel,
    seed: u64,
    realization: u32,
    components: Vec<SpectralComponent>,
}

/// Build parameters beyond model, `p` and seed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralOptions {
    pub realization: u32,
    pub eps: f64,
    pub strategy: Option<SamplerStrategy>,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        Self {
            realization: 0,
            eps: DEFAULT_EPS,
            strategy: None,
        }
    }
}

pub fn build_spectral_ensemble(
    model: &GneitingModel,
    p: usize,
    seed: u64,
) -> Result<SpectralEnsemble, SpectralError> {
    build_spectral_ensemble_with(model, p, seed, SpectralOptions::default())
}

/// Component `j` (1-based) consumes its own stream
/// `(realization << 32) | j`, so the ensemble does not depend on scheduling.
pub fn build_spectral_ensemble_with(
    model: &GneitingModel,
    p: usize,
    seed: u64,
    opts: SpectralOptions,
) -> Result<SpectralEnsemble, SpectralError> {
    if p == 0 {
        return Err(SpectralError::EmptyEnsemble);
    }
    if model.mixture().has_atom_at_zero() {
        return Err(SpectralError::AtomAtZero);
    }
    let spec = model.variogram();
    let strategy = opts.strategy.unwrap_or(spec.strategy());
    let sampler = TemporalSampler::with_strategy(spec, strategy, opts.eps)?;
    let k = model.k();
    let build = |j: usize| {
        let mut rng = RngStream::component(seed, opts.realization, j as u32);
        let r = model.mixture().sample(&mut rng);
        let omega = sample_gaussian_vector(k, 2.0 * r, &mut rng);
        let law = ConditionalTemporalLaw::new(strategy, &omega, r);
        let tau = sampler.sample(law.lambda, &mut rng);
        SpectralComponent {
            omega,
            tau,
            phi: sample_phase(&mut rng),
            amp: sample_amplitude(&mut rng),
        }
    };
    #[cfg(feature = "parallel")]
    let components = (1..=p).into_par_iter().map(build).collect();
    #[cfg(not(feature = "parallel"))]
    let components = (1..=p).map(build).collect();
    Ok(SpectralEnsemble {
        model: model.clone(),
        seed,
        realization: opts.realization,
        components,
    })
}

impl SpectralEnsemble {
    /// Ensemble from explicit components (for tests and demos).
    pub fn from_components(
        model: &GneitingModel,
        seed: u64,
        components: Vec<SpectralComponent>,
    ) -> Result<Self, SpectralError> {
        if components.is_empty() {
            return Err(SpectralError::EmptyEnsemble);
        }
        if let Some(c) = components.iter().find(|c| c.omega.len() != model.k()) {
            return Err(SpectralError::DimensionMismatch {
                expected: model.k(),
                got: c.omega.len(),
            });
        }
        Ok(Self {
            model: model.clone(),
            seed,
            realization: 0,
            components,
        })
    }

    pub fn p(&self) -> usize {
        self.components.len()
    }

    pub fn k(&self) -> usize {
        self.model.k()
    }

    pub fn components(&self) -> &[SpectralComponent] {
        &self.components
    }

    pub fn model(&self) -> &GneitingModel {
        &self.model
    }

    /// `Σⱼ ampⱼ/√p · cos(⟨ωⱼ,x⟩ + τⱼt + φⱼ)` at every point.
    pub fn evaluate(&self, points: Arc<SpaceTimePointSet>) -> Result<FieldRealization, SpectralError> {
        evaluate_spectral(self, points)
    }
}

pub fn evaluate_spectral(
    ensemble: &SpectralEnsemble,
    points: Arc<SpaceTimePointSet>,
) -> Result<FieldRealization, SpectralError> {
    if points.k() != ensemble.k() {
        return Err(SpectralError::DimensionMismatch {
            expected: ensemble.k(),
            got: points.k(),
        });
    }
    let norm = 1.0 / (ensemble.p() as f64).sqrt();
    let freqs: Vec<f64> = ensemble
        .components
        .iter()
        .flat_map(|c| c.omega.iter().copied())
        .collect();
    let amps: Vec<f64> = ensemble.components.iter().map(|c| c.amp * norm).collect();
    let slots = TimeSlots::new(&points);
    let comps = &ensemble.components;
    let values = sum_waves(&points, &slots, &freqs, &amps, |j, m| {
        comps[j].tau * slots.times[m] + comps[j].phi
    });
    Ok(FieldRealization {
        points,
        values,
        provenance: Provenance::new(
            &ensemble.model,
            Method::Spectral,
            ensemble.p(),
            ensemble.seed,
            ensemble.realization,
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::MixtureMeasure;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fig1() -> GneitingModel {
        GneitingModel::new(
            2,
            MixtureMeasure::dirac(0.01).unwrap(),
            VariogramSpec::linear(1.0).unwrap(),
        )
        .unwrap()
    }

    fn cf(draws: &[f64], u: f64) -> f64 {
        draws.iter().map(|t| (u * t).cos()).sum::<f64>() / draws.len() as f64
    }

    #[test]
    fn spatial_frequency_variance() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let n = 100_000;
        let mut s = [0.0; 2];
        for _ in 0..n {
            let w = sample_spatial_frequency(0.01, 2, &mut rng).unwrap();
            s[0] += w[0] * w[0];
            s[1] += w[1] * w[1];
        }
        for v in s {
            let v = v / n as f64;
            assert!((v / 0.02 - 1.0).abs() < 0.03, "{v}");
        }
        assert_eq!(
            sample_spatial_frequency(0.0, 2, &mut rng),
            Err(SpectralError::NonPositiveScale(0.0))
        );
    }

    #[test]
    fn spatial_frequency_independence() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let n = 100_000;
        let (mut sxy, mut sxz, mut syz, mut sxx) = (0.0, 0.0, 0.0, 0.0);
        for _ in 0..n {
            let w = sample_spatial_frequency(0.5, 3, &mut rng).unwrap();
            sxy += w[0] * w[1];
            sxz += w[0] * w[2];
            syz += w[1] * w[2];
            sxx += w[0] * w[0];
        }
        for c in [sxy, sxz, syz] {
            assert!((c / sxx).abs() < 0.01);
        }
    }

    #[test]
    fn zero_lambda_short_circuits() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for spec in [
            VariogramSpec::linear(1.0).unwrap(),
            VariogramSpec::cauchy_class(1.0, 1.0, 0.5).unwrap(),
            VariogramSpec::logarithmic(2.06).unwrap(),
        ] {
            let law = ConditionalTemporalLaw {
                strategy: spec.strategy(),
                lambda: 0.0,
            };
            assert_eq!(sample_temporal_frequency(law, &spec, &mut rng).unwrap(), 0.0);
        }
    }

    #[test]
    fn worked_cf_values() {
        let n = 100_000;
        let tol = 4.0 / (n as f64).sqrt();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let lin = TemporalSampler::new(&VariogramSpec::linear(1.0).unwrap(), DEFAULT_EPS).unwrap();
        let d: Vec<f64> = (0..n).map(|_| lin.sample(2.0, &mut rng)).collect();
        assert!((cf(&d, 1.0) - (-2f64).exp()).abs() < tol);

        let a: f64 = 2.06;
        let spec = VariogramSpec::logarithmic(a).unwrap();
        let g = TemporalSampler::new(&spec, DEFAULT_EPS).unwrap();
        // λ in the logarithmic example's own convention is |ω|²/(4r ln a²)
        let shape = 0.7;
        let d: Vec<f64> = (0..n).map(|_| g.sample(shape * (a * a).ln(), &mut rng)).collect();
        let expected = (a * a / (a * a + 1.0)).powf(shape);
        assert!((cf(&d, 1.0) - expected).abs() < tol);

        let c = TemporalSampler::new(&VariogramSpec::cauchy_class(1.0, 1.0, 0.5).unwrap(), DEFAULT_EPS)
            .unwrap();
        let d: Vec<f64> = (0..n).map(|_| c.sample(1.0, &mut rng)).collect();
        assert!((cf(&d, 3.0) - (-1f64).exp()).abs() < 0.013);
    }

    #[test]
    fn strategy_errors() {
        let spec = VariogramSpec::cauchy_class(1.0, 1.0, 0.5).unwrap();
        assert!(matches!(
            TemporalSampler::with_strategy(&spec, SamplerStrategy::DirectCauchy, 0.01),
            Err(SpectralError::StrategyMismatch { .. })
        ));
        assert!(matches!(
            TemporalSampler::with_strategy(&spec, SamplerStrategy::ShotNoiseGeneric, 0.01),
            Err(SpectralError::StrategyMismatch { .. })
        ));
        assert!(matches!(
            TemporalSampler::new(&spec, 1.5),
            Err(SpectralError::InvalidEps(_))
        ));
    }

    #[test]
    fn atom_at_zero_rejected() {
        let m = GneitingModel::new(
            2,
            MixtureMeasure::tabulated(vec![(0.0, 0.5), (0.01, 0.5)]).unwrap(),
            VariogramSpec::linear(1.0).unwrap(),
        )
        .unwrap();
        assert_eq!(build_spectral_ensemble(&m, 10, 1).err(), Some(SpectralError::AtomAtZero));
        assert_eq!(build_spectral_ensemble(&fig1(), 0, 1).err(), Some(SpectralError::EmptyEnsemble));
    }

    #[test]
    fn ensemble_shape_and_determinism() {
        let m = fig1();
        let e1 = build_spectral_ensemble(&m, 1, 9).unwrap();
        assert_eq!(e1.p(), 1);
        assert!(e1.components()[0].amp > 0.0);
        let a = build_spectral_ensemble(&m, 500, 11).unwrap();
        let b = build_spectral_ensemble(&m, 500, 11).unwrap();
        assert_eq!(a.components(), b.components());
        let c = build_spectral_ensemble(&m, 500, 12).unwrap();
        assert_ne!(a.components(), c.components());
        for comp in a.components() {
            assert!(comp.phi > 0.0 && comp.phi < 2.0 * std::f64::consts::PI);
        }
        // component j does not depend on p
        let e1_same_seed = build_spectral_ensemble(&m, 1, 11).unwrap();
        assert_eq!(e1_same_seed.components()[0], a.components()[0]);
    }

    #[test]
    fn degenerate_component_is_zero() {
        let m = fig1();
        let e = SpectralEnsemble::from_components(
            &m,
            0,
            vec![SpectralComponent {
                omega: vec![0.0, 0.0],
                tau: 0.0,
                phi: std::f64::consts::FRAC_PI_2,
                amp: 1.0,
            }],
        )
        .unwrap();
        let pts = SpaceTimePointSet::from_points(2, vec![1.0, 2.0, -3.0, 4.0], vec![0.0, 7.0]).unwrap();
        let f = e.evaluate(Arc::new(pts)).unwrap();
        assert!(f.values.iter().all(|v| v.abs() < 1e-15));
        let bad = SpaceTimePointSet::from_points(1, vec![1.0], vec![0.0]).unwrap();
        assert!(matches!(
            e.evaluate(Arc::new(bad)),
            Err(SpectralError::DimensionMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn amplitude_energy() {
        let e = build_spectral_ensemble(&fig1(), 20_000, 5).unwrap();
        let mean: f64 = e.components().iter().map(|c| c.amp * c.amp / 2.0).sum::<f64>() / 20_000.0;
        assert!((mean - 1.0).abs() < 0.03);
    }
}
