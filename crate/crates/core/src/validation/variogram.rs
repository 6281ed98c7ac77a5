use serde::Serialize;

use super::ValidationError;
use crate::field::FieldRealization;
use crate::model::GridSpec;

/// Which lags are scanned: spatial lags (pooled over the coordinate axes)
/// at a fixed time lag, or time lags at a fixed spatial lag vector.
#[derive(Clone, Debug, PartialEq)]
pub enum VariogramMode {
    SpatialAtFixedTime { u: f64 },
    TemporalAtFixedSpace { h: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmpiricalVariogram {
    /// Scanned lag magnitudes (spatial distance or time lag).
    pub lag_axis: Vec<f64>,
    pub values: Vec<f64>,
    pub pair_counts: Vec<usize>,
    pub realization_id: u32,
}

const GRID_TOL: f64 = 1e-9;

fn steps(lag: f64, mesh: f64) -> Option<i64> {
    let s = lag / mesh;
    let r = s.round();
    ((s - r).abs() <= GRID_TOL * s.abs().max(1.0)).then_some(r as i64)
}

/// Half the mean squared increment over all grid pairs at index offset `off`.
fn semivariance(values: &[f64], g: &GridSpec, off: &[i64]) -> (f64, usize) {
    let dims = g.counts.len();
    let mut strides = vec![1usize; dims];
    for d in 1..dims {
        strides[d] = strides[d - 1] * g.counts[d - 1];
    }
    let ranges: Vec<(usize, usize)> = (0..dims)
        .map(|d| {
            let n = g.counts[d] as i64;
            let o = off[d];
            (0.max(-o).min(n) as usize, n.min(n - o).max(0) as usize)
        })
        .collect();
    if ranges.iter().any(|(lo, hi)| lo >= hi) {
        return (0.0, 0);
    }
    let shift: i64 = (0..dims).map(|d| off[d] * strides[d] as i64).sum();
    let mut sum = 0.0;
    let mut count = 0usize;
    let mut idx: Vec<usize> = ranges.iter().map(|r| r.0).collect();
    let (lo0, hi0) = ranges[0];
    loop {
        let base: usize = (1..dims).map(|d| idx[d] * strides[d]).sum();
        for i in lo0..hi0 {
            let a = base + i;
            let b = (a as i64 + shift) as usize;
            let dz = values[a] - values[b];
            sum += dz * dz;
        }
        count += hi0 - lo0;
        let mut d = 1;
        while d < dims {
            idx[d] += 1;
            if idx[d] < ranges[d].1 {
                break;
            }
            idx[d] = ranges[d].0;
            d += 1;
        }
        if d == dims {
            break;
        }
    }
    (0.5 * sum / count as f64, count)
}

/// Method-of-moments semivariogram `½·mean[(Z(s) - Z(s + lag))²]`.
///
/// Lags are physical distances and must be whole multiples of the grid mesh.
/// In spatial mode each lag `l` is applied along every coordinate axis in
/// turn and the pairs are pooled.
pub fn empirical_variogram(
    field: &FieldRealization,
    mode: &VariogramMode,
    lag_grid: &[f64],
) -> Result<EmpiricalVariogram, ValidationError> {
    let g = field.points.grid().ok_or(ValidationError::NotAGrid)?;
    let k = g.k();
    let mut values = Vec::with_capacity(lag_grid.len());
    let mut pair_counts = Vec::with_capacity(lag_grid.len());
    for &lag in lag_grid {
        let offsets: Vec<Vec<i64>> = match mode {
            VariogramMode::SpatialAtFixedTime { u } => {
                let ut = steps(*u, g.mesh[k])
                    .ok_or_else(|| ValidationError::LagNotRepresentable(vec![*u]))?;
                (0..k)
                    .map(|d| {
                        let s = steps(lag, g.mesh[d])
                            .ok_or_else(|| ValidationError::LagNotRepresentable(vec![lag]))?;
                        let mut off = vec![0i64; k + 1];
                        off[d] = s;
                        off[k] = ut;
                        Ok(off)
                    })
                    .collect::<Result<_, ValidationError>>()?
            }
            VariogramMode::TemporalAtFixedSpace { h } => {
                if h.len() != k {
                    return Err(ValidationError::DimensionMismatch {
                        expected: k,
                        got: h.len(),
                    });
                }
                let mut off: Vec<i64> = h
                    .iter()
                    .zip(&g.mesh)
                    .map(|(x, m)| steps(*x, *m))
                    .collect::<Option<_>>()
                    .ok_or_else(|| ValidationError::LagNotRepresentable(h.clone()))?;
                off.push(
                    steps(lag, g.mesh[k])
                        .ok_or_else(|| ValidationError::LagNotRepresentable(vec![lag]))?,
                );
                vec![off]
            }
        };
        let (mut sum, mut count) = (0.0, 0usize);
        for off in &offsets {
            let (v, c) = semivariance(&field.values, g, off);
            sum += v * c as f64;
            count += c;
        }
        if count == 0 {
            return Err(ValidationError::NoPairs(vec![lag]));
        }
        values.push(sum / count as f64);
        pair_counts.push(count);
    }
    Ok(EmpiricalVariogram {
        lag_axis: lag_grid.to_vec(),
        values,
        pair_counts,
        realization_id: field.provenance.realization,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Method, Provenance};
    use crate::model::{GneitingModel, MixtureMeasure, SpaceTimePointSet, VariogramSpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn field(mut values: impl FnMut(usize, &SpaceTimePointSet) -> f64) -> FieldRealization {
        let g = GridSpec::new(vec![0.0, 0.0, 0.0], vec![1.0, 1.0, 0.2], vec![20, 15, 10]).unwrap();
        let pts = SpaceTimePointSet::from_grid(g);
        let m = GneitingModel::new(
            2,
            MixtureMeasure::dirac(0.01).unwrap(),
            VariogramSpec::linear(1.0).unwrap(),
        )
        .unwrap();
        FieldRealization {
            values: (0..pts.len()).map(|i| values(i, &pts)).collect(),
            points: Arc::new(pts),
            provenance: Provenance::new(&m, Method::Spectral, 1, 0, 0),
        }
    }

    #[test]
    fn constant_field_is_zero() {
        let f = field(|_, _| 3.5);
        let v = empirical_variogram(&f, &VariogramMode::SpatialAtFixedTime { u: 0.4 }, &[0.0, 1.0, 5.0])
            .unwrap();
        assert!(v.values.iter().all(|&x| x == 0.0));
        assert!(v.pair_counts.iter().all(|&c| c > 0));
    }

    #[test]
    fn white_noise_is_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = field(|_, _| crate::distributions::sample_gaussian(1.0, &mut rng));
        let v = empirical_variogram(
            &f,
            &VariogramMode::TemporalAtFixedSpace { h: vec![0.0, 0.0] },
            &[0.0, 0.2, 0.6],
        )
        .unwrap();
        assert_eq!(v.values[0], 0.0);
        for (x, c) in v.values[1..].iter().zip(&v.pair_counts[1..]) {
            assert!((x - 1.0).abs() < 3.0 * (2.0 / *c as f64).sqrt() * 1.5);
        }
    }

    #[test]
    fn linear_trend_matches_hand_count() {
        // Z = x1: semivariance at spatial lag 2 along x1 is 2, along x2 is 0
        let f = field(|i, p| p.spatial(i)[0]);
        let v = empirical_variogram(&f, &VariogramMode::SpatialAtFixedTime { u: 0.0 }, &[2.0]).unwrap();
        let n1 = 18 * 15 * 10;
        let n2 = 20 * 13 * 10;
        assert_eq!(v.pair_counts[0], n1 + n2);
        let expected = (2.0 * n1 as f64) / (n1 + n2) as f64;
        assert!((v.values[0] - expected).abs() < 1e-12);
    }

    #[test]
    fn unrepresentable_lags() {
        let f = field(|_, _| 0.0);
        assert!(matches!(
            empirical_variogram(&f, &VariogramMode::SpatialAtFixedTime { u: 0.3 }, &[1.0]),
            Err(ValidationError::LagNotRepresentable(_))
        ));
        assert!(matches!(
            empirical_variogram(&f, &VariogramMode::SpatialAtFixedTime { u: 0.0 }, &[1.5]),
            Err(ValidationError::LagNotRepresentable(_))
        ));
        assert!(matches!(
            empirical_variogram(&f, &VariogramMode::SpatialAtFixedTime { u: 0.0 }, &[40.0]),
            Err(ValidationError::NoPairs(_))
        ));
    }
}
