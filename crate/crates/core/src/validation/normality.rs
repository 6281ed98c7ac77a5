use serde::Serialize;
use statrs::function::erf::erfc;

use crate::field::FieldRealization;

/// Upper 1% point of the Anderson–Darling statistic for a fully specified
/// null distribution.
pub const AD_CRITICAL_1PCT: f64 = 3.857;

const SIGNIFICANCE: f64 = 0.01;

/// `ln Φ(x)` of the standard normal, accurate in both tails.
fn ln_norm_cdf(x: f64) -> f64 {
    (0.5 * erfc(-x / std::f64::consts::SQRT_2)).ln()
}

fn norm_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Anderson–Darling statistic of `sample` against N(0, 1).
pub fn anderson_darling(sample: &[f64]) -> f64 {
    let mut x = sample.to_vec();
    x.sort_by(f64::total_cmp);
    let n = x.len();
    let s: f64 = (0..n)
        .map(|i| (2 * i + 1) as f64 * (ln_norm_cdf(x[i]) + ln_norm_cdf(-x[n - 1 - i])))
        .sum();
    -(n as f64) - s / n as f64
}

/// One-sample Kolmogorov–Smirnov statistic against N(0, 1).
pub fn ks_statistic(sample: &[f64]) -> f64 {
    let mut x = sample.to_vec();
    x.sort_by(f64::total_cmp);
    let n = x.len() as f64;
    x.iter()
        .enumerate()
        .map(|(i, &v)| {
            let f = norm_cdf(v);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

/// Survival function of the Kolmogorov distribution,
/// `Q(t) = 2 Σ_{j≥1} (-1)^{j-1} e^{-2j²t²}`.
pub fn kolmogorov_sf(t: f64) -> f64 {
    if t < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for j in 1..=100 {
        let term = (-2.0 * (j * j) as f64 * t * t).exp();
        sum += if j % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Asymptotic p-value with the usual small-sample correction.
fn ks_p_value(d: f64, en: f64) -> f64 {
    kolmogorov_sf((en + 0.12 + 0.11 / en) * d)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormalityReport {
    pub n: usize,
    pub ad_statistic: f64,
    pub ks_statistic: f64,
    pub ks_p_value: f64,
    /// Anderson–Darling verdict at the 1% level.
    pub pass: bool,
}

/// Pools the values of all fields and tests them against N(0, 1).
pub fn normality_report(fields: &[FieldRealization]) -> NormalityReport {
    let pooled: Vec<f64> = fields.iter().flat_map(|f| f.values.iter().copied()).collect();
    normality_of(&pooled)
}

pub(crate) fn normality_of(sample: &[f64]) -> NormalityReport {
    let ad = anderson_darling(sample);
    let d = ks_statistic(sample);
    NormalityReport {
        n: sample.len(),
        ad_statistic: ad,
        ks_statistic: d,
        ks_p_value: ks_p_value(d, (sample.len() as f64).sqrt()),
        pass: ad < AD_CRITICAL_1PCT,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TwoSampleReport {
    pub statistic: f64,
    pub p_value: f64,
    pub pass: bool,
}

/// Two-sample Kolmogorov–Smirnov test at the 1% level.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> TwoSampleReport {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let p = ks_p_value(d, (na * nb / (na + nb)).sqrt());
    TwoSampleReport {
        statistic: d,
        p_value: p,
        pass: p > SIGNIFICANCE,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::sample_gaussian;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn kolmogorov_quantiles() {
        // classical critical values: 1.358 at 5%, 1.628 at 1%
        assert!((kolmogorov_sf(1.358) - 0.05).abs() < 1e-3);
        assert!((kolmogorov_sf(1.628) - 0.01).abs() < 1e-3);
    }

    #[test]
    fn normal_passes_uniform_fails() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let x: Vec<f64> = (0..20_000).map(|_| sample_gaussian(1.0, &mut rng)).collect();
        let r = normality_of(&x);
        assert!(r.pass, "{r:?}");
        assert!(r.ks_p_value > 0.01);
        let u: Vec<f64> = (0..20_000).map(|_| rng.random::<f64>()).collect();
        let r = normality_of(&u);
        assert!(!r.pass);
        assert!(r.ks_p_value < 1e-6);
    }

    #[test]
    fn anderson_darling_hand_value() {
        // n = 1 at x = 0: -1 - (ln ½ + ln ½) = 2 ln 2 - 1
        assert!((anderson_darling(&[0.0]) - (2.0 * 2f64.ln() - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn two_sample() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let a: Vec<f64> = (0..5000).map(|_| sample_gaussian(1.0, &mut rng)).collect();
        let b: Vec<f64> = (0..7000).map(|_| sample_gaussian(1.0, &mut rng)).collect();
        let c: Vec<f64> = (0..7000).map(|_| sample_gaussian(1.3, &mut rng)).collect();
        assert!(ks_two_sample(&a, &b).pass);
        assert!(!ks_two_sample(&a, &c).pass);
        assert_eq!(ks_two_sample(&a, &a).statistic, 0.0);
    }
}
