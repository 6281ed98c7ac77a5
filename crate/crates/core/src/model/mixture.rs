use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ModelError;
use crate::distributions::gamma_unchecked;

/// Tolerance on the total weight of a tabulated mixture.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-12;

/// Probability measure `μ` on `[0, ∞)` whose Laplace transform is the
/// completely monotone spatial function `φ(t) = ∫ e^(-rt) μ(dr)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MixtureKind {
    /// `φ(t) = e^(-rt)`: Gaussian spatial covariance.
    DiracAt { r: f64 },
    /// `φ(t) = e^(-c√t)`: exponential spatial covariance. `R = c²/(4G)`
    /// with `G ~ Gamma(1/2, 1)`.
    SqrtGammaHalf { c: f64 },
    /// Finite mixture `Σ wᵢ δ_{rᵢ}`.
    Tabulated { atoms: Vec<(f64, f64)> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixtureMeasure {
    kind: MixtureKind,
    label: String,
}

impl MixtureMeasure {
    pub fn dirac(r: f64) -> Result<Self, ModelError> {
        Self::new(MixtureKind::DiracAt { r })
    }

    pub fn sqrt_gamma_half(c: f64) -> Result<Self, ModelError> {
        Self::new(MixtureKind::SqrtGammaHalf { c })
    }

    pub fn tabulated(atoms: Vec<(f64, f64)>) -> Result<Self, ModelError> {
        Self::new(MixtureKind::Tabulated { atoms })
    }

    pub fn new(kind: MixtureKind) -> Result<Self, ModelError> {
        let label = match &kind {
            MixtureKind::DiracAt { r } => {
                if !(*r > 0.0 && r.is_finite()) {
                    return Err(ModelError::range("mixture.r", *r, "(0, ∞)"));
                }
                format!("dirac(r={r})")
            }
            MixtureKind::SqrtGammaHalf { c } => {
                if !(*c > 0.0 && c.is_finite()) {
                    return Err(ModelError::range("mixture.c", *c, "(0, ∞)"));
                }
                format!("sqrt_gamma_half(c={c})")
            }
            MixtureKind::Tabulated { atoms } => {
                if atoms.is_empty() {
                    return Err(ModelError::Invalid {
                        field: "mixture.atoms".into(),
                        message: "at least one atom is required".into(),
                    });
                }
                for (i, &(r, w)) in atoms.iter().enumerate() {
                    if !(r >= 0.0 && r.is_finite()) {
                        return Err(ModelError::range(format!("mixture.atoms[{i}].r"), r, "[0, ∞)"));
                    }
                    if !(w > 0.0 && w.is_finite()) {
                        return Err(ModelError::range(format!("mixture.atoms[{i}].weight"), w, "(0, 1]"));
                    }
                }
                let total: f64 = atoms.iter().map(|a| a.1).sum();
                if (total - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
                    return Err(ModelError::Invalid {
                        field: "mixture.atoms".into(),
                        message: format!("weights sum to {total}, expected 1"),
                    });
                }
                format!("tabulated({} atoms)", atoms.len())
            }
        };
        Ok(Self { kind, label })
    }

    pub fn kind(&self) -> &MixtureKind {
        &self.kind
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn has_atom_at_zero(&self) -> bool {
        match &self.kind {
            MixtureKind::Tabulated { atoms } => atoms.iter().any(|&(r, w)| r == 0.0 && w > 0.0),
            _ => false,
        }
    }

    /// `φ(t) = ∫ e^(-rt) μ(dr)`.
    pub fn laplace(&self, t: f64) -> f64 {
        match &self.kind {
            MixtureKind::DiracAt { r } => (-r * t).exp(),
            MixtureKind::SqrtGammaHalf { c } => (-c * t.sqrt()).exp(),
            MixtureKind::Tabulated { atoms } => atoms.iter().map(|&(r, w)| w * (-r * t).exp()).sum(),
        }
    }

    /// Draws the latent scale `R ~ μ`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.kind {
            MixtureKind::DiracAt { r } => *r,
            MixtureKind::SqrtGammaHalf { c } => {
                // Lévy law: E[exp(-tR)] = exp(-c√t)
                let g = gamma_unchecked(0.5, 1.0, rng);
                c * c / (4.0 * g)
            }
            MixtureKind::Tabulated { atoms } => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                for &(r, w) in atoms {
                    acc += w;
                    if u < acc {
                        return r;
                    }
                }
                atoms.last().expect("non-empty").0
            }
        }
    }
}
