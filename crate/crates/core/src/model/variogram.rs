use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use super::ModelError;

/// Entries of the catalog of one-dimensional variograms with explicitly
/// known spectral densities.
///
/// Each entry is defined by a base pair `(γ₀, f₀)` with
/// `γ₀(v) = ∫ (1 - cos(vx)) f₀(x) dx`; a [`VariogramFamily::TableEntry`]
/// applies a time scale `s` and a weight `w`, i.e. `γ(u) = w·γ₀(|u|/s)`
/// with density `w·s·f₀(s·x)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableId {
    /// `|v|^α`, density `c_α |x|^(-1-α)`, `0 < α < 2`.
    Power,
    /// `|v| - 1 + e^(-|v|)`, density `1 / (π x² (1 + x²))`.
    LinearExp,
    /// `|v|` below 1, `2|v| - 1` above, density `(1 + cos x) / (π x²)`.
    BrokenLinear,
    /// `v²(3 - |v|)` below 1, `3|v| - 1` above, density `6 (1 - cos x) / (π x⁴)`.
    BrokenCubic,
    /// `ln(1 + v²)`, density `e^(-|x|) / |x|`.
    Log,
    /// `8√π sinh²(asinh(v) / 4)`, density `e^(-|x|) / |x|^(3/2)`.
    Asinh,
    /// `2|v| atan|v| - ln(1 + v²)`, density `e^(-|x|) / x²`.
    Arctan,
    /// `(8√π/3)(1 - (1 + v²)^(3/4) cos(3 atan(v) / 2))`, density `e^(-|x|) / |x|^(5/2)`.
    PowerCos,
    /// `1 - e^(-|v|)`, density `1 / (π (1 + x²))`. Bounded, with unit
    /// spectral mass.
    BoundedExponential,
}

impl TableId {
    pub const ALL: [TableId; 9] = [
        TableId::Power,
        TableId::LinearExp,
        TableId::BrokenLinear,
        TableId::BrokenCubic,
        TableId::Log,
        TableId::Asinh,
        TableId::Arctan,
        TableId::PowerCos,
        TableId::BoundedExponential,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TableId::Power => "power",
            TableId::LinearExp => "linear_exp",
            TableId::BrokenLinear => "broken_linear",
            TableId::BrokenCubic => "broken_cubic",
            TableId::Log => "log",
            TableId::Asinh => "asinh",
            TableId::Arctan => "arctan",
            TableId::PowerCos => "power_cos",
            TableId::BoundedExponential => "bounded_exponential",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|id| id.name() == name)
    }

    fn base_variogram(self, alpha: f64, v: f64) -> f64 {
        let v = v.abs();
        match self {
            TableId::Power => v.powf(alpha),
            TableId::LinearExp => v + (-v).exp_m1(),
            TableId::BrokenLinear => {
                if v < 1.0 {
                    v
                } else {
                    2.0 * v - 1.0
                }
            }
            TableId::BrokenCubic => {
                if v < 1.0 {
                    v * v * (3.0 - v)
                } else {
                    3.0 * v - 1.0
                }
            }
            TableId::Log => (v * v).ln_1p(),
            TableId::Asinh => 8.0 * PI.sqrt() * (v.asinh() / 4.0).sinh().powi(2),
            TableId::Arctan => 2.0 * v * v.atan() - (v * v).ln_1p(),
            TableId::PowerCos => {
                8.0 * PI.sqrt() / 3.0
                    * (1.0 - (1.0 + v * v).powf(0.75) * (1.5 * v.atan()).cos())
            }
            TableId::BoundedExponential => -(-v).exp_m1(),
        }
    }

    fn base_density(self, alpha: f64, x: f64) -> f64 {
        let x = x.abs();
        match self {
            TableId::Power => power_density_constant(alpha) * x.powf(-1.0 - alpha),
            TableId::LinearExp => 1.0 / (PI * x * x * (1.0 + x * x)),
            TableId::BrokenLinear => (1.0 + x.cos()) / (PI * x * x),
            TableId::BrokenCubic => {
                let s = (0.5 * x).sin();
                12.0 * s * s / (PI * x.powi(4))
            }
            TableId::Log => (-x).exp() / x,
            TableId::Asinh => (-x).exp() / x.powf(1.5),
            TableId::Arctan => (-x).exp() / (x * x),
            TableId::PowerCos => (-x).exp() / x.powf(2.5),
            TableId::BoundedExponential => 1.0 / (PI * (1.0 + x * x)),
        }
    }

    /// Power-law envelope `coef·x^(-power)` of the base density at large
    /// `x` (cosine factors averaged out), if the tail is not exponential.
    fn base_tail(self, alpha: f64) -> Option<(f64, f64)> {
        match self {
            TableId::Power => Some((power_density_constant(alpha), 1.0 + alpha)),
            TableId::LinearExp => Some((1.0 / PI, 4.0)),
            TableId::BrokenLinear => Some((1.0 / PI, 2.0)),
            TableId::BrokenCubic => Some((6.0 / PI, 4.0)),
            TableId::BoundedExponential => Some((1.0 / PI, 2.0)),
            TableId::Log | TableId::Asinh | TableId::Arctan | TableId::PowerCos => None,
        }
    }

    fn oscillatory(self) -> bool {
        matches!(self, TableId::BrokenLinear | TableId::BrokenCubic)
    }

    fn base_total_mass(self) -> Option<f64> {
        match self {
            TableId::BoundedExponential => Some(1.0),
            _ => None,
        }
    }
}

/// `-2Γ(α) / (Γ(α/2) Γ(-α/2))`, so that `∫(1 - cos ux) c_α |x|^(-1-α) dx = |u|^α`.
pub fn power_density_constant(alpha: f64) -> f64 {
    -2.0 * gamma(alpha) / (gamma(alpha / 2.0) * gamma(-alpha / 2.0))
}

fn default_one() -> f64 {
    1.0
}

/// Variogram families of the temporal structure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum VariogramFamily {
    /// `γ(u) = b|u|`.
    Linear { b: f64 },
    /// `γ(u) = |u|^α`, `0 < α < 2`.
    FractionalPower { alpha: f64 },
    /// `γ(u) = ln(a² + u²)/ln(a²) - 1`, `a > 1`.
    Logarithmic { a: f64 },
    /// `γ(u) = (a|u|^α + 1)^β - 1`, `a > 0`, `0 < α ≤ 2`, `0 < β ≤ 1`.
    CauchyClass { a: f64, alpha: f64, beta: f64 },
    /// Catalog entry `w·γ₀(|u|/s)`, see [`TableId`].
    TableEntry {
        id: TableId,
        #[serde(default)]
        alpha: Option<f64>,
        #[serde(default = "default_one")]
        scale: f64,
        #[serde(default = "default_one")]
        weight: f64,
    },
}

/// How the conditional temporal frequency is drawn in the spectral method.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplerStrategy {
    /// Cauchy law with scale `λb` (linear variogram).
    DirectCauchy,
    /// Gaussian scale mixture with gamma mixing (logarithmic variogram).
    GammaMixture,
    /// Bilateral stable law scaled by a tilted unilateral stable variable
    /// (Cauchy class, fractional power).
    StableMixture,
    /// Shot-noise sum of marked Poisson points built from the spectral
    /// density; truncated, hence approximate, for unbounded variograms.
    ShotNoiseGeneric,
    /// Compound Poisson sum, exact for bounded variograms.
    CompoundPoisson,
}

impl SamplerStrategy {
    pub const ALL: [SamplerStrategy; 5] = [
        SamplerStrategy::DirectCauchy,
        SamplerStrategy::GammaMixture,
        SamplerStrategy::StableMixture,
        SamplerStrategy::ShotNoiseGeneric,
        SamplerStrategy::CompoundPoisson,
    ];

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.name() == name)
    }

    pub fn name(self) -> &'static str {
        match self {
            SamplerStrategy::DirectCauchy => "direct_cauchy",
            SamplerStrategy::GammaMixture => "gamma_mixture",
            SamplerStrategy::StableMixture => "stable_mixture",
            SamplerStrategy::ShotNoiseGeneric => "shot_noise_generic",
            SamplerStrategy::CompoundPoisson => "compound_poisson",
        }
    }
}

/// Symmetric spectral density of a variogram, `γ(u) = ∫ (1 - cos ux) f(x) dx`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralDensity {
    base: DensityBase,
    scale: f64,
    weight: f64,
}

#[derive(Clone, Debug, PartialEq)]
enum DensityBase {
    Table { id: TableId, alpha: f64 },
    /// `e^(-a|x|) / (|x| ln a²)`
    Logarithmic { a: f64 },
}

impl SpectralDensity {
    /// Density at `x` (even in `x`).
    pub fn density(&self, x: f64) -> f64 {
        match self.base {
            DensityBase::Table { id, alpha } => {
                self.weight * self.scale * id.base_density(alpha, self.scale * x)
            }
            DensityBase::Logarithmic { a } => {
                let x = x.abs();
                (-a * x).exp() / (x * (a * a).ln())
            }
        }
    }

    /// Density with oscillating factors replaced by their average beyond
    /// `x`'s first few periods; used when tabulating far tails.
    pub fn smoothed_density(&self, x: f64) -> f64 {
        match (&self.base, self.power_tail()) {
            (DensityBase::Table { id, .. }, Some((coef, power))) if id.oscillatory() => {
                coef * x.abs().powf(-power)
            }
            _ => self.density(x),
        }
    }

    pub fn is_oscillatory(&self) -> bool {
        matches!(self.base, DensityBase::Table { id, .. } if id.oscillatory())
    }

    /// Asymptotic envelope `coef·|x|^(-power)` for power-law tails.
    pub fn power_tail(&self) -> Option<(f64, f64)> {
        match self.base {
            DensityBase::Table { id, alpha } => id.base_tail(alpha).map(|(c, p)| {
                (self.weight * self.scale.powf(1.0 - p) * c, p)
            }),
            DensityBase::Logarithmic { .. } => None,
        }
    }

    /// Total mass `𝒳(ℝ)`; `None` when infinite.
    pub fn total_mass(&self) -> Option<f64> {
        match self.base {
            DensityBase::Table { id, .. } => id.base_total_mass().map(|m| self.weight * m),
            DensityBase::Logarithmic { .. } => None,
        }
    }
}

/// A validated member of the variogram catalog together with the sampler
/// strategy the spectral method uses for it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VariogramSpec {
    family: VariogramFamily,
    bounded: bool,
    strategy: SamplerStrategy,
}

fn check_range(
    field: &str,
    value: f64,
    ok: bool,
    range: &'static str,
) -> Result<(), ModelError> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(ModelError::range(format!("variogram.{field}"), value, range))
    }
}

impl VariogramSpec {
    /// Validates the family parameters and selects the default strategy.
    pub fn new(family: VariogramFamily) -> Result<Self, ModelError> {
        match &family {
            VariogramFamily::Linear { b } => check_range("b", *b, *b > 0.0, "(0, ∞)")?,
            VariogramFamily::FractionalPower { alpha } => {
                check_range("alpha", *alpha, *alpha > 0.0 && *alpha < 2.0, "(0, 2)")?
            }
            VariogramFamily::Logarithmic { a } => check_range("a", *a, *a > 1.0, "(1, ∞)")?,
            VariogramFamily::CauchyClass { a, alpha, beta } => {
                check_range("a", *a, *a > 0.0, "(0, ∞)")?;
                check_range("alpha", *alpha, *alpha > 0.0 && *alpha <= 2.0, "(0, 2]")?;
                check_range("beta", *beta, *beta > 0.0 && *beta <= 1.0, "(0, 1]")?;
            }
            VariogramFamily::TableEntry {
                id,
                alpha,
                scale,
                weight,
            } => {
                check_range("scale", *scale, *scale > 0.0, "(0, ∞)")?;
                check_range("weight", *weight, *weight > 0.0, "(0, ∞)")?;
                match (id, alpha) {
                    (TableId::Power, Some(a)) => {
                        check_range("alpha", *a, *a > 0.0 && *a < 2.0, "(0, 2)")?
                    }
                    (TableId::Power, None) => {
                        return Err(ModelError::Invalid {
                            field: "variogram.alpha".into(),
                            message: "the power entry requires alpha in (0, 2)".into(),
                        })
                    }
                    (_, Some(_)) => {
                        return Err(ModelError::Invalid {
                            field: "variogram.alpha".into(),
                            message: format!("entry '{}' takes no alpha", id.name()),
                        })
                    }
                    (_, None) => {}
                }
            }
        }
        let mut spec = Self {
            family,
            bounded: false,
            strategy: SamplerStrategy::ShotNoiseGeneric,
        };
        spec.bounded = spec
            .spectral_density()
            .is_some_and(|d| d.total_mass().is_some());
        spec.strategy = spec.default_strategy();
        Ok(spec)
    }

    pub fn linear(b: f64) -> Result<Self, ModelError> {
        Self::new(VariogramFamily::Linear { b })
    }

    pub fn fractional_power(alpha: f64) -> Result<Self, ModelError> {
        Self::new(VariogramFamily::FractionalPower { alpha })
    }

    pub fn logarithmic(a: f64) -> Result<Self, ModelError> {
        Self::new(VariogramFamily::Logarithmic { a })
    }

    pub fn cauchy_class(a: f64, alpha: f64, beta: f64) -> Result<Self, ModelError> {
        Self::new(VariogramFamily::CauchyClass { a, alpha, beta })
    }

    pub fn table(id: TableId, alpha: Option<f64>) -> Result<Self, ModelError> {
        Self::new(VariogramFamily::TableEntry {
            id,
            alpha,
            scale: 1.0,
            weight: 1.0,
        })
    }

    /// Replaces the sampler strategy, rejecting combinations the family
    /// does not support.
    pub fn with_strategy(mut self, strategy: SamplerStrategy) -> Result<Self, ModelError> {
        if !self.supported_strategies().contains(&strategy) {
            return Err(ModelError::StrategyMismatch {
                strategy: strategy.name(),
                family: self.family_name(),
            });
        }
        self.strategy = strategy;
        Ok(self)
    }

    pub fn family(&self) -> &VariogramFamily {
        &self.family
    }

    pub fn family_name(&self) -> String {
        match &self.family {
            VariogramFamily::Linear { .. } => "linear".into(),
            VariogramFamily::FractionalPower { .. } => "fractional_power".into(),
            VariogramFamily::Logarithmic { .. } => "logarithmic".into(),
            VariogramFamily::CauchyClass { .. } => "cauchy_class".into(),
            VariogramFamily::TableEntry { id, .. } => format!("table:{}", id.name()),
        }
    }

    pub fn bounded(&self) -> bool {
        self.bounded
    }

    pub fn strategy(&self) -> SamplerStrategy {
        self.strategy
    }

    fn default_strategy(&self) -> SamplerStrategy {
        match &self.family {
            VariogramFamily::Linear { .. } => SamplerStrategy::DirectCauchy,
            VariogramFamily::FractionalPower { .. } => SamplerStrategy::StableMixture,
            VariogramFamily::Logarithmic { .. } => SamplerStrategy::GammaMixture,
            VariogramFamily::CauchyClass { .. } => SamplerStrategy::StableMixture,
            VariogramFamily::TableEntry { .. } if self.bounded => SamplerStrategy::CompoundPoisson,
            VariogramFamily::TableEntry { .. } => SamplerStrategy::ShotNoiseGeneric,
        }
    }

    pub fn supported_strategies(&self) -> Vec<SamplerStrategy> {
        use SamplerStrategy::*;
        match &self.family {
            VariogramFamily::Linear { .. } => vec![DirectCauchy, ShotNoiseGeneric],
            VariogramFamily::FractionalPower { .. } => vec![StableMixture, ShotNoiseGeneric],
            VariogramFamily::Logarithmic { .. } => vec![GammaMixture, ShotNoiseGeneric],
            VariogramFamily::CauchyClass { .. } => vec![StableMixture],
            VariogramFamily::TableEntry { .. } if self.bounded => {
                vec![CompoundPoisson, ShotNoiseGeneric]
            }
            VariogramFamily::TableEntry { .. } => vec![ShotNoiseGeneric],
        }
    }

    /// `γ(u)`.
    pub fn evaluate(&self, u: f64) -> f64 {
        let u = u.abs();
        match &self.family {
            VariogramFamily::Linear { b } => b * u,
            VariogramFamily::FractionalPower { alpha } => u.powf(*alpha),
            VariogramFamily::Logarithmic { a } => (u * u / (a * a)).ln_1p() / (a * a).ln(),
            VariogramFamily::CauchyClass { a, alpha, beta } => {
                (beta * (a * u.powf(*alpha)).ln_1p()).exp_m1()
            }
            VariogramFamily::TableEntry {
                id,
                alpha,
                scale,
                weight,
            } => weight * id.base_variogram(alpha.unwrap_or(0.0), u / scale),
        }
    }

    /// Spectral density of `γ`, when known in closed form.
    pub fn spectral_density(&self) -> Option<SpectralDensity> {
        let table = |id, alpha, scale, weight| SpectralDensity {
            base: DensityBase::Table { id, alpha },
            scale,
            weight,
        };
        match &self.family {
            // b|u| = b·γ₀ of the power entry with α = 1
            VariogramFamily::Linear { b } => Some(table(TableId::Power, 1.0, 1.0, *b)),
            VariogramFamily::FractionalPower { alpha } => {
                Some(table(TableId::Power, *alpha, 1.0, 1.0))
            }
            VariogramFamily::Logarithmic { a } => Some(SpectralDensity {
                base: DensityBase::Logarithmic { a: *a },
                scale: 1.0,
                weight: 1.0,
            }),
            VariogramFamily::CauchyClass { .. } => None,
            VariogramFamily::TableEntry {
                id,
                alpha,
                scale,
                weight,
            } => Some(table(*id, alpha.unwrap_or(0.0), *scale, *weight)),
        }
    }
}

/// Boundedness of a variogram and presence of an atom at zero in the
/// conditional temporal frequency; both hold exactly when the spectral
/// measure of the variogram is finite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VariogramClass {
    pub bounded: bool,
    pub temporal_atom: bool,
}

pub fn classify_variogram(spec: &VariogramSpec) -> VariogramClass {
    VariogramClass {
        bounded: spec.bounded(),
        temporal_atom: spec.bounded(),
    }
}
