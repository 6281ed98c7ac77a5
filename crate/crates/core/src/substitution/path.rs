use nalgebra::{Cholesky, DMatrix, DVector};
use rand::Rng;

use super::SubstitutionError;
use crate::distributions::sample_gaussian;
use crate::model::VariogramSpec;

/// Default cap on the number of instants for the dense factorization.
pub const DEFAULT_MAX_INSTANTS: usize = 10_000;

/// Diagonal jitter tried, in order, when the plain factorization fails.
pub const JITTER_LADDER: [f64; 3] = [1e-12, 1e-10, 1e-8];

/// Values of an intrinsic path at sorted instants, anchored at `W(0) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct IntrinsicPath {
    pub instants: Vec<f64>,
    pub values: Vec<f64>,
}

/// Cholesky factor of `K(t, t') = γ(t) + γ(t') - γ(t - t')` over the nonzero
/// instants, reusable for any number of independent paths.
#[derive(Clone, Debug)]
pub struct IntrinsicFactor {
    instants: Vec<f64>,
    /// Position in `instants` of each row of `chol`.
    rows: Vec<usize>,
    chol: DMatrix<f64>,
    pub jitter: f64,
}

pub(crate) fn validate_instants(instants: &[f64]) -> Result<Vec<f64>, SubstitutionError> {
    if instants.is_empty() || instants.iter().any(|t| !t.is_finite()) {
        return Err(SubstitutionError::InvalidInstants);
    }
    let mut sorted = instants.to_vec();
    sorted.sort_by(f64::total_cmp);
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(SubstitutionError::InvalidInstants);
    }
    Ok(sorted)
}

impl IntrinsicFactor {
    pub fn new(spec: &VariogramSpec, instants: &[f64]) -> Result<Self, SubstitutionError> {
        Self::with_cap(spec, instants, DEFAULT_MAX_INSTANTS)
    }

    pub fn with_cap(
        spec: &VariogramSpec,
        instants: &[f64],
        cap: usize,
    ) -> Result<Self, SubstitutionError> {
        let instants = validate_instants(instants)?;
        if instants.len() > cap {
            return Err(SubstitutionError::TooManyInstants {
                n: instants.len(),
                cap,
            });
        }
        let rows: Vec<usize> = (0..instants.len()).filter(|&i| instants[i] != 0.0).collect();
        let ts: Vec<f64> = rows.iter().map(|&i| instants[i]).collect();
        let g: Vec<f64> = ts.iter().map(|&t| spec.evaluate(t)).collect();
        let n = ts.len();
        let k = DMatrix::from_fn(n, n, |a, b| g[a] + g[b] - spec.evaluate(ts[a] - ts[b]));
        let mut jitter = 0.0;
        let mut chol = Cholesky::new(k.clone());
        for eps in JITTER_LADDER {
            if chol.is_some() {
                break;
            }
            jitter = eps;
            let mut kj = k.clone();
            for d in 0..n {
                kj[(d, d)] += eps;
            }
            chol = Cholesky::new(kj);
        }
        let chol = chol.ok_or(SubstitutionError::Factorization { jitter })?.unpack();
        Ok(Self {
            instants,
            rows,
            chol,
            jitter,
        })
    }

    pub fn instants(&self) -> &[f64] {
        &self.instants
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> IntrinsicPath {
        let n = self.rows.len();
        let z = DVector::from_fn(n, |_, _| sample_gaussian(1.0, rng));
        let w = &self.chol * z;
        let mut values = vec![0.0; self.instants.len()];
        for (row, &i) in self.rows.iter().enumerate() {
            values[i] = w[row];
        }
        IntrinsicPath {
            instants: self.instants.clone(),
            values,
        }
    }
}

/// One path of the intrinsic field with variogram `spec`, `W(0) = 0`.
pub fn simulate_intrinsic_path<R: Rng + ?Sized>(
    spec: &VariogramSpec,
    instants: &[f64],
    rng: &mut R,
) -> Result<IntrinsicPath, SubstitutionError> {
    Ok(IntrinsicFactor::new(spec, instants)?.sample(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn anchor_only() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let p = simulate_intrinsic_path(&VariogramSpec::linear(1.0).unwrap(), &[0.0], &mut rng).unwrap();
        assert_eq!(p.values, vec![0.0]);
    }

    #[test]
    fn linear_variance() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = IntrinsicFactor::new(&VariogramSpec::linear(1.0).unwrap(), &[1.0, 0.0]).unwrap();
        let n = 100_000;
        let v: f64 = (0..n)
            .map(|_| {
                let p = f.sample(&mut rng);
                assert_eq!(p.values[0], 0.0);
                p.values[1] * p.values[1]
            })
            .sum::<f64>()
            / n as f64;
        assert!((v / 2.0 - 1.0).abs() < 0.03, "{v}");
    }

    #[test]
    fn cauchy_increment_variance() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let spec = VariogramSpec::cauchy_class(1.0, 1.0, 0.5).unwrap();
        let f = IntrinsicFactor::new(&spec, &[0.0, 1.0, 2.0]).unwrap();
        let n = 100_000;
        let v: f64 = (0..n)
            .map(|_| {
                let p = f.sample(&mut rng);
                (p.values[2] - p.values[1]).powi(2)
            })
            .sum::<f64>()
            / n as f64;
        let target = 2.0 * (2f64.sqrt() - 1.0);
        assert!((v / target - 1.0).abs() < 0.05, "{v}");
    }

    #[test]
    fn instant_errors() {
        let spec = VariogramSpec::linear(1.0).unwrap();
        assert_eq!(
            IntrinsicFactor::new(&spec, &[0.0, 1.0, 1.0]).err(),
            Some(SubstitutionError::InvalidInstants)
        );
        assert_eq!(
            IntrinsicFactor::with_cap(&spec, &[0.1, 0.2, 0.3], 2).err(),
            Some(SubstitutionError::TooManyInstants { n: 3, cap: 2 })
        );
        assert_eq!(IntrinsicFactor::new(&spec, &[]).err(), Some(SubstitutionError::InvalidInstants));
    }

    #[test]
    fn nearly_coincident_instants_factor() {
        let spec = VariogramSpec::linear(1.0).unwrap();
        let f = IntrinsicFactor::new(&spec, &[1.0, 1.0 + 1e-14]).unwrap();
        assert!(f.jitter <= JITTER_LADDER[2]);
    }
}
