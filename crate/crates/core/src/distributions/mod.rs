//! Random-variate toolkit used by both simulation routes.
//!
//! Every sampler is a pure function of its parameters and the random stream
//! it is handed; see [`RngStream`] for how streams are addressed.

mod rng;
mod stable;

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma, Open01, Poisson, StandardNormal};
use thiserror::Error;

pub use rng::RngStream;
pub use stable::{
    sample_positive_stable, sample_symmetric_stable, sample_tilted_stable,
    tilted_stable_double_rejection, PLAIN_REJECTION_MAX_TILT,
};
pub(crate) use stable::{symmetric_stable_unchecked, tilted_stable_unchecked};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DistributionError {
    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
}

fn positive(name: &'static str, value: f64) -> Result<(), DistributionError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(DistributionError::OutOfRange {
            name,
            value,
            range: "(0, ∞)",
        })
    }
}

/// Uniform draw on the open interval `(0, 1)`.
#[inline]
pub fn sample_open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(Open01)
}

/// Uniform phase on `(0, 2π)`.
#[inline]
pub fn sample_phase<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    2.0 * PI * sample_open_unit(rng)
}

/// Box–Muller amplitude `√(-2 ln U)`, strictly positive.
#[inline]
pub fn sample_amplitude<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    (-2.0 * sample_open_unit(rng).ln()).sqrt()
}

#[inline]
pub fn sample_gaussian<R: Rng + ?Sized>(variance: f64, rng: &mut R) -> f64 {
    variance.sqrt() * rng.sample::<f64, _>(StandardNormal)
}

/// `dim` i.i.d. centered Gaussian coordinates with the given variance.
pub fn sample_gaussian_vector<R: Rng + ?Sized>(
    dim: usize,
    variance: f64,
    rng: &mut R,
) -> Vec<f64> {
    let sd = variance.sqrt();
    (0..dim)
        .map(|_| sd * rng.sample::<f64, _>(StandardNormal))
        .collect()
}

/// Gamma draw with density `∝ x^(shape-1) e^(-rate·x)`.
pub fn sample_gamma<R: Rng + ?Sized>(
    shape: f64,
    rate: f64,
    rng: &mut R,
) -> Result<f64, DistributionError> {
    positive("shape", shape)?;
    positive("rate", rate)?;
    Ok(gamma_unchecked(shape, rate, rng))
}

#[inline]
pub(crate) fn gamma_unchecked<R: Rng + ?Sized>(shape: f64, rate: f64, rng: &mut R) -> f64 {
    Gamma::new(shape, 1.0 / rate)
        .expect("validated gamma parameters")
        .sample(rng)
}

/// Cauchy draw with characteristic function `exp(-scale·|u|)`.
#[inline]
pub fn sample_cauchy<R: Rng + ?Sized>(scale: f64, rng: &mut R) -> f64 {
    scale * (PI * (sample_open_unit(rng) - 0.5)).tan()
}

/// Laplace draw with density `(1/2)·rate·e^(-rate|x|)`.
#[inline]
pub fn sample_laplace<R: Rng + ?Sized>(rate: f64, rng: &mut R) -> f64 {
    let e: f64 = rng.sample(Exp1);
    if rng.random::<bool>() {
        e / rate
    } else {
        -e / rate
    }
}

/// Number of terms kept when truncating the logarithmic shot-noise series
/// with Poisson intensity `lambda/t` on `[a, ∞)`: the residual variance
/// fraction `(λ/(λ+2))^n₀` falls below `eps`.
pub fn log_shot_noise_terms(lambda: f64, eps: f64) -> usize {
    let n0 = (-eps.ln() / (2.0 / lambda).ln_1p()).ceil();
    if n0.is_finite() {
        (n0 as usize).max(1)
    } else {
        1
    }
}

/// First `n₀` points of a Poisson process on `[a, ∞)` with intensity
/// `lambda / t`, obtained by inverting the cumulative intensity
/// `λ ln(t/a)` of a unit-rate process: `Tₙ = a (U₁⋯Uₙ)^(-1/λ)`.
pub fn sample_poisson_times_logintensity<R: Rng + ?Sized>(
    a: f64,
    lambda: f64,
    eps: f64,
    rng: &mut R,
) -> Vec<f64> {
    let n0 = log_shot_noise_terms(lambda, eps);
    let ln_a = a.ln();
    let mut level = 0.0;
    (0..n0)
        .map(|_| {
            level -= sample_open_unit(rng).ln();
            (ln_a + level / lambda).exp()
        })
        .collect()
}

/// Compound Poisson draw: the sum of `N ~ Poisson(intensity)` i.i.d. jumps.
/// Returns exactly 0 when `N = 0`, which happens with probability
/// `exp(-intensity)`.
pub fn sample_compound_poisson<R, F>(intensity: f64, mut jump: F, rng: &mut R) -> f64
where
    R: Rng + ?Sized,
    F: FnMut(&mut R) -> f64,
{
    if intensity <= 0.0 {
        return 0.0;
    }
    let n = poisson_count(intensity, rng);
    (0..n).map(|_| jump(rng)).sum()
}

pub(crate) fn poisson_count<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean).expect("positive mean").sample(rng) as u64
}
