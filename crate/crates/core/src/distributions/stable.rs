//! Stable laws: symmetric (bilateral) stable via Chambers–Mallows–Stuck,
//! positive (unilateral) stable via Kanter's representation, and the
//! exponentially tilted positive stable law via Devroye's double rejection.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use rand::Rng;
use rand_distr::{Exp1, Open01, StandardNormal};

use super::{sample_gaussian, DistributionError};

/// Tilts at or below this value use plain rejection from the untilted law,
/// whose acceptance probability is `exp(-tilt^β) ≥ e^{-1}` there.
pub const PLAIN_REJECTION_MAX_TILT: f64 = 1.0;

#[inline]
fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Zolotarev's function
/// `A(x) = [sin(βx)^β sin((1-β)x)^(1-β) / sin x]^(1/(1-β))` on `(0, π)`.
fn zolotarev_a(x: f64, beta: f64) -> f64 {
    let ib = 1.0 - beta;
    let inner = (ib * sinc(ib * x)).powf(ib) * (beta * sinc(beta * x)).powf(beta) / sinc(x);
    inner.powf(1.0 / ib)
}

/// `B(x)/B(0)` with `B(x) = sinc(x) / (sinc(βx)^β sinc((1-β)x)^(1-β))`.
fn zolotarev_b_ratio(x: f64, beta: f64) -> f64 {
    let ib = 1.0 - beta;
    sinc(x) / (sinc(beta * x).powf(beta) * sinc(ib * x).powf(ib))
}

fn check_alpha(alpha: f64) -> Result<(), DistributionError> {
    if alpha > 0.0 && alpha <= 2.0 {
        Ok(())
    } else {
        Err(DistributionError::OutOfRange {
            name: "alpha",
            value: alpha,
            range: "(0, 2]",
        })
    }
}

fn check_beta(beta: f64) -> Result<(), DistributionError> {
    if beta > 0.0 && beta <= 1.0 {
        Ok(())
    } else {
        Err(DistributionError::OutOfRange {
            name: "beta",
            value: beta,
            range: "(0, 1]",
        })
    }
}

/// Symmetric α-stable draw with characteristic function `exp(-|u|^α)`.
pub fn sample_symmetric_stable<R: Rng + ?Sized>(
    alpha: f64,
    rng: &mut R,
) -> Result<f64, DistributionError> {
    check_alpha(alpha)?;
    Ok(symmetric_stable_unchecked(alpha, rng))
}

pub(crate) fn symmetric_stable_unchecked<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    if alpha == 2.0 {
        // exp(-u²) is the CF of N(0, 2)
        return sample_gaussian(2.0, rng);
    }
    let v = PI * (rng.sample::<f64, _>(Open01) - 0.5);
    if alpha == 1.0 {
        return v.tan();
    }
    let w: f64 = rng.sample(Exp1);
    (alpha * v).sin() / v.cos().powf(1.0 / alpha)
        * (((1.0 - alpha) * v).cos() / w).powf((1.0 - alpha) / alpha)
}

/// Positive β-stable draw with Laplace transform `exp(-s^β)` (Kanter).
pub fn sample_positive_stable<R: Rng + ?Sized>(
    beta: f64,
    rng: &mut R,
) -> Result<f64, DistributionError> {
    check_beta(beta)?;
    Ok(positive_stable_unchecked(beta, rng))
}

fn positive_stable_unchecked<R: Rng + ?Sized>(beta: f64, rng: &mut R) -> f64 {
    if beta == 1.0 {
        return 1.0;
    }
    let u = PI * rng.sample::<f64, _>(Open01);
    let e: f64 = rng.sample(Exp1);
    (zolotarev_a(u, beta) / e).powf((1.0 - beta) / beta)
}

/// Exponentially tilted positive stable draw: density proportional to
/// `exp(-tilt·s) f_β(s)`, Laplace transform `exp(tilt^β - (tilt + s)^β)`.
///
/// `beta = 1` is the point mass at 1. Small tilts reject from the untilted
/// law; larger tilts use the double rejection method, whose acceptance rate
/// does not degrade with the tilt.
pub fn sample_tilted_stable<R: Rng + ?Sized>(
    beta: f64,
    tilt: f64,
    rng: &mut R,
) -> Result<f64, DistributionError> {
    check_beta(beta)?;
    if !(tilt >= 0.0 && tilt.is_finite()) {
        return Err(DistributionError::OutOfRange {
            name: "tilt",
            value: tilt,
            range: "[0, ∞)",
        });
    }
    Ok(tilted_stable_unchecked(beta, tilt, rng))
}

pub(crate) fn tilted_stable_unchecked<R: Rng + ?Sized>(beta: f64, tilt: f64, rng: &mut R) -> f64 {
    if beta == 1.0 {
        return 1.0;
    }
    if tilt <= PLAIN_REJECTION_MAX_TILT {
        loop {
            let s = positive_stable_unchecked(beta, rng);
            let u: f64 = rng.sample(Open01);
            if u <= (-tilt * s).exp() {
                return s;
            }
        }
    }
    tilted_stable_double_rejection(beta, tilt, rng).0
}

/// Double rejection sampler for the tilted positive stable law. Returns the
/// draw and the number of proposals consumed (inner plus outer), which is
/// exposed for acceptance-rate diagnostics.
pub fn tilted_stable_double_rejection<R: Rng + ?Sized>(
    beta: f64,
    tilt: f64,
    rng: &mut R,
) -> (f64, u64) {
    debug_assert!(beta > 0.0 && beta < 1.0 && tilt > 0.0);
    let lambda_beta = tilt.powf(beta);
    let gamma = lambda_beta * beta * (1.0 - beta);
    let sgamma = gamma.sqrt();
    let c1 = FRAC_PI_2.sqrt();
    let c2 = 2.0 + c1;
    let c3 = c2 * sgamma;
    let xi = (1.0 + SQRT_2 * c3) / PI;
    let psi = c3 * (-gamma * PI * PI / 8.0).exp() / PI.sqrt();
    let w1 = c1 * xi / sgamma;
    let w2 = 2.0 * PI.sqrt() * psi;
    let w3 = xi * PI;
    let b = (1.0 - beta) / beta;

    let mut proposals = 0u64;
    loop {
        // First rejection: the angle U of Zolotarev's representation.
        let (u, z_bar, z) = loop {
            proposals += 1;
            let v: f64 = rng.sample(Open01);
            let w_: f64 = rng.sample(Open01);
            let u = if gamma >= 1.0 {
                if v < w1 / (w1 + w2) {
                    rng.sample::<f64, _>(StandardNormal).abs() / sgamma
                } else {
                    PI * (1.0 - w_ * w_)
                }
            } else if v < w3 / (w3 + w2) {
                PI * w_
            } else {
                PI * (1.0 - w_ * w_)
            };
            let w: f64 = rng.sample(Open01);
            let zeta = zolotarev_b_ratio(u, beta).sqrt();
            let z = 1.0 / (1.0 - (1.0 + beta * zeta / sgamma).powf(-1.0 / beta));
            let mut rho = PI * (-lambda_beta * (1.0 - 1.0 / (zeta * zeta))).exp()
                / ((1.0 + c1) * sgamma / zeta + z);
            let mut d = 0.0;
            if u >= 0.0 && gamma >= 1.0 {
                d += xi * (-gamma * u * u / 2.0).exp();
            }
            if u > 0.0 && u < PI {
                d += psi / (PI - u).sqrt();
            }
            if (0.0..=PI).contains(&u) && gamma < 1.0 {
                d += xi;
            }
            rho *= d;
            let z_bar = w * rho;
            if u < PI && z_bar <= 1.0 {
                break (u, z_bar, z);
            }
        };

        // Second rejection: X given U, from a normal / uniform / exponential
        // envelope of its log-concave density.
        let a = zolotarev_a(u, beta);
        let m = (b / a).powf(beta) * lambda_beta;
        let delta = (m * beta / a).sqrt();
        let a1 = delta * c1;
        let a3 = z / a;
        let s = a1 + delta + a3;
        let v: f64 = rng.sample(Open01);
        let mut n_ = 0.0;
        let mut e_ = 0.0;
        let x = if v < a1 / s {
            n_ = rng.sample(StandardNormal);
            m - delta * f64::abs(n_)
        } else if v < (a1 + delta) / s {
            m + delta * rng.sample::<f64, _>(Open01)
        } else {
            e_ = rng.sample(Exp1);
            m + delta + e_ * a3
        };
        if x < 0.0 {
            continue;
        }
        let e = -z_bar.ln();
        let mut c = a * (x - m) + tilt * ((m / x).powf(b) - 1.0) * m.powf(-b);
        if x < m {
            c -= n_ * n_ / 2.0;
        } else if x > m + delta {
            c -= e_;
        }
        if c <= e {
            return (x.powf(-b), proposals);
        }
    }
}
