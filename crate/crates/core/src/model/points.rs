use serde::{Deserialize, Serialize};

use super::ModelError;

/// Regular space-time grid: `k` spatial axes followed by the time axis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub origin: Vec<f64>,
    pub mesh: Vec<f64>,
    pub counts: Vec<usize>,
}

impl GridSpec {
    pub fn new(origin: Vec<f64>, mesh: Vec<f64>, counts: Vec<usize>) -> Result<Self, ModelError> {
        if origin.len() < 2 || origin.len() != mesh.len() || origin.len() != counts.len() {
            return Err(ModelError::Invalid {
                field: "grid".into(),
                message: "origin, mesh and counts need k + 1 ≥ 2 matching entries".into(),
            });
        }
        if let Some(&m) = mesh.iter().find(|m| !(**m > 0.0 && m.is_finite())) {
            return Err(ModelError::range("grid.mesh", m, "(0, ∞)"));
        }
        if counts.contains(&0) {
            return Err(ModelError::Invalid {
                field: "grid.counts".into(),
                message: "every axis needs at least one node".into(),
            });
        }
        Ok(Self {
            origin,
            mesh,
            counts,
        })
    }

    pub fn k(&self) -> usize {
        self.origin.len() - 1
    }

    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Node coordinates along `axis` (`k` is the time axis).
    pub fn axis(&self, axis: usize) -> Vec<f64> {
        (0..self.counts[axis])
            .map(|i| self.origin[axis] + i as f64 * self.mesh[axis])
            .collect()
    }

    pub fn times(&self) -> Vec<f64> {
        self.axis(self.k())
    }

    /// Number of points in one time slice.
    pub fn slice_len(&self) -> usize {
        self.counts[..self.k()].iter().product()
    }
}

/// A finite set of `n` space-time points. Grid-backed sets list their
/// points with the first spatial axis varying fastest and time slowest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceTimePointSet {
    k: usize,
    spatial: Vec<f64>,
    times: Vec<f64>,
    grid: Option<GridSpec>,
}

impl SpaceTimePointSet {
    /// Builds a scattered point set from row-major `n×k` spatial coordinates.
    pub fn from_points(k: usize, spatial: Vec<f64>, times: Vec<f64>) -> Result<Self, ModelError> {
        if k == 0 {
            return Err(ModelError::Invalid {
                field: "points".into(),
                message: "space dimension must be positive".into(),
            });
        }
        if times.is_empty() || spatial.len() != k * times.len() {
            return Err(ModelError::Invalid {
                field: "points".into(),
                message: format!(
                    "{} spatial values for {} points of dimension {k}",
                    spatial.len(),
                    times.len()
                ),
            });
        }
        if spatial.iter().chain(&times).any(|v| !v.is_finite()) {
            return Err(ModelError::Invalid {
                field: "points".into(),
                message: "coordinates must be finite".into(),
            });
        }
        Ok(Self {
            k,
            spatial,
            times,
            grid: None,
        })
    }

    pub fn from_grid(grid: GridSpec) -> Self {
        let k = grid.k();
        let n = grid.len();
        let axes: Vec<Vec<f64>> = (0..=k).map(|a| grid.axis(a)).collect();
        let mut spatial = Vec::with_capacity(n * k);
        let mut times = Vec::with_capacity(n);
        let mut idx = vec![0usize; k + 1];
        for _ in 0..n {
            for d in 0..k {
                spatial.push(axes[d][idx[d]]);
            }
            times.push(axes[k][idx[k]]);
            for (d, i) in idx.iter_mut().enumerate() {
                *i += 1;
                if *i < grid.counts[d] {
                    break;
                }
                *i = 0;
            }
        }
        Self {
            k,
            spatial,
            times,
            grid: Some(grid),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn grid(&self) -> Option<&GridSpec> {
        self.grid.as_ref()
    }

    pub fn spatial(&self, i: usize) -> &[f64] {
        &self.spatial[i * self.k..(i + 1) * self.k]
    }

    pub fn time(&self, i: usize) -> f64 {
        self.times[i]
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// Sorted distinct time coordinates.
    pub fn distinct_times(&self) -> Vec<f64> {
        let mut t = self.times.clone();
        t.sort_by(f64::total_cmp);
        t.dedup();
        t
    }
}
