//! Shot-noise samplers for the conditional temporal frequency.
//!
//! The Lévy measure `λ𝒳` of `T` is split as
//! `θ(t) 𝒳ₜ(dx) dt` with `𝒳ₜ(dx) ∝ e^{-t w(x)} w(x) 𝒳(dx)`, `w = x²/(1+x²)`.
//! Poisson times below a truncation level `t₀` contribute jumps with law
//! `(1 - e^{-t₀ w}) 𝒳`; the remainder `e^{-t₀ w} 𝒳` only carries small jumps
//! except on `|x| ≥ 1`, where it is kept exactly. Small jumps are replaced by
//! a centered Gaussian of equal variance.

use rand::Rng;

use crate::distributions::{
    poisson_count, sample_gaussian, sample_laplace, sample_open_unit,
    sample_poisson_times_logintensity,
};
use crate::model::SpectralDensity;

/// Truncated logarithmic shot noise: `Σ_{n ≤ n₀} X_{Tₙ}` with Poisson times of
/// intensity `c/t` on `[a, ∞)` and marks Laplace with rate `Tₙ`.
pub fn log_shot_noise_truncated<R: Rng + ?Sized>(a: f64, c: f64, eps: f64, rng: &mut R) -> f64 {
    log_shot_noise_parts(a, c, eps, rng).0
}

/// Truncated sum plus the variance `c / T²_{n₀}` of the discarded points.
fn log_shot_noise_parts<R: Rng + ?Sized>(a: f64, c: f64, eps: f64, rng: &mut R) -> (f64, f64) {
    let times = sample_poisson_times_logintensity(a, c, eps, rng);
    let sum = times.iter().map(|&t| sample_laplace(t, rng)).sum();
    let last = *times.last().expect("at least one term");
    (sum, c / (last * last))
}

/// Logarithmic variogram sampler: truncated series plus a Gaussian for the
/// residual points. `lambda` is `|ω|²/(4r)`.
pub(crate) fn sample_log_shot_noise<R: Rng + ?Sized>(a: f64, lambda: f64, eps: f64, rng: &mut R) -> f64 {
    let c = lambda / a.ln();
    let (sum, residual) = log_shot_noise_parts(a, c, eps, rng);
    sum + sample_gaussian(residual, rng)
}

/// Upper bound on the mean number of exact jumps per draw.
pub const MAX_MEAN_JUMPS: f64 = 256.0;

const LOG_PER_DECADE: usize = 40;
const X_LO: f64 = 1e-6;
const X_MID: f64 = 100.0;
const X_HI: f64 = 1e4;
const LINEAR_STEP: f64 = 0.02;
const LEVELS_PER_DECADE: i32 = 4;
const LEVEL_MIN_EXP: i32 = -2;
const LEVEL_MAX_EXP: i32 = 12;

/// Tabulated jump laws for a fixed spectral density, one per truncation level.
#[derive(Clone, Debug)]
pub struct GenericShotNoise {
    xs: Vec<f64>,
    log_cell: Vec<bool>,
    levels: Vec<Level>,
    tail: Option<(f64, f64)>,
}

#[derive(Clone, Debug)]
struct Level {
    /// One-sided mass `∫₀^∞` of the exact-jump measure; doubled for `|x|`.
    mass: f64,
    /// Variance of the Gaussian replacing the small jumps.
    small_var: f64,
    /// Cumulative one-sided mass at the grid nodes, `cum[0] = 0`.
    cum: Vec<f64>,
}

impl GenericShotNoise {
    pub fn new(density: &SpectralDensity) -> Self {
        let (xs, log_cell) = grid();
        let f: Vec<f64> = xs
            .iter()
            .map(|&x| {
                if x > X_MID {
                    density.smoothed_density(x)
                } else {
                    density.density(x)
                }
            })
            .collect();
        let tail = density.power_tail();
        // ∫₀^{x_lo} x² f from a local power fit f ∝ x^{-q}
        let q = -(f[1] / f[0]).ln() / (xs[1] / xs[0]).ln();
        let below = f[0] * X_LO.powi(3) / (3.0 - q);
        let levels = (LEVEL_MIN_EXP * LEVELS_PER_DECADE..=LEVEL_MAX_EXP * LEVELS_PER_DECADE)
            .map(|i| {
                let t0 = 10f64.powf(i as f64 / LEVELS_PER_DECADE as f64);
                level(&xs, &log_cell, &f, t0, below, tail)
            })
            .collect();
        Self {
            xs,
            log_cell,
            levels,
            tail,
        }
    }

    /// Index of the truncation level used for `lambda`: the deepest one
    /// whose mean jump count fits the budget.
    fn level_for(&self, lambda: f64) -> usize {
        self.levels
            .iter()
            .rposition(|l| 2.0 * lambda * l.mass <= MAX_MEAN_JUMPS)
            .unwrap_or(0)
    }

    pub fn sample<R: Rng + ?Sized>(&self, lambda: f64, rng: &mut R) -> f64 {
        let lvl = &self.levels[self.level_for(lambda)];
        let n = poisson_count(2.0 * lambda * lvl.mass, rng);
        let mut sum = 0.0;
        for _ in 0..n {
            let x = self.jump(lvl, rng);
            sum += if rng.random::<bool>() { x } else { -x };
        }
        sum + sample_gaussian(lambda * lvl.small_var, rng)
    }

    fn jump<R: Rng + ?Sized>(&self, lvl: &Level, rng: &mut R) -> f64 {
        let target = rng.random::<f64>() * lvl.mass;
        let body = *lvl.cum.last().expect("nonempty");
        if target >= body {
            let (_, power) = self.tail.expect("tail mass implies a power tail");
            return X_HI * sample_open_unit(rng).powf(-1.0 / (power - 1.0));
        }
        let cell = lvl.cum.partition_point(|&c| c <= target).clamp(1, self.xs.len() - 1) - 1;
        let (lo, hi) = (self.xs[cell], self.xs[cell + 1]);
        let u = rng.random::<f64>();
        if self.log_cell[cell] {
            lo * (hi / lo).powf(u)
        } else {
            lo + (hi - lo) * u
        }
    }
}

/// Node grid: log-spaced on `[x_lo, 1]`, uniform on `[1, x_mid]`, log-spaced
/// on `[x_mid, x_hi]`. `log_cell[i]` tells how cell `[xᵢ, xᵢ₊₁]` is spaced.
fn grid() -> (Vec<f64>, Vec<bool>) {
    let mut xs = vec![];
    let mut log_cell = vec![];
    let decades = (1.0 / X_LO).log10().round() as usize;
    for i in 0..decades * LOG_PER_DECADE {
        xs.push(X_LO * 10f64.powf(i as f64 / LOG_PER_DECADE as f64));
        log_cell.push(true);
    }
    let steps = ((X_MID - 1.0) / LINEAR_STEP).round() as usize;
    for i in 0..steps {
        xs.push(1.0 + i as f64 * LINEAR_STEP);
        log_cell.push(false);
    }
    let decades = (X_HI / X_MID).log10().round() as usize;
    for i in 0..=decades * LOG_PER_DECADE {
        xs.push(X_MID * 10f64.powf(i as f64 / LOG_PER_DECADE as f64));
        log_cell.push(true);
    }
    (xs, log_cell)
}

fn level(xs: &[f64], log_cell: &[bool], f: &[f64], t0: f64, below: f64, tail: Option<(f64, f64)>) -> Level {
    let weight = |x: f64| {
        if x >= 1.0 {
            1.0
        } else {
            -(-t0 * x * x / (1.0 + x * x)).exp_m1()
        }
    };
    let jump: Vec<f64> = xs.iter().zip(f).map(|(&x, &fx)| weight(x) * fx).collect();
    let small: Vec<f64> = xs
        .iter()
        .zip(f)
        .map(|(&x, &fx)| if x >= 1.0 { 0.0 } else { (-t0 * x * x / (1.0 + x * x)).exp() * x * x * fx })
        .collect();
    let mut cum = Vec::with_capacity(xs.len());
    cum.push(0.0);
    let mut small_half = below;
    for i in 0..xs.len() - 1 {
        let cell = |g: &[f64]| {
            if log_cell[i] {
                // trapezoid in ln x
                0.5 * (g[i] * xs[i] + g[i + 1] * xs[i + 1]) * (xs[i + 1] / xs[i]).ln()
            } else {
                0.5 * (g[i] + g[i + 1]) * (xs[i + 1] - xs[i])
            }
        };
        cum.push(cum[i] + cell(&jump));
        small_half += cell(&small);
    }
    let tail_mass = tail
        .map(|(coef, power)| coef * X_HI.powf(1.0 - power) / (power - 1.0))
        .unwrap_or(0.0);
    Level {
        mass: cum.last().unwrap() + tail_mass,
        small_var: 2.0 * small_half,
        cum,
    }
}
