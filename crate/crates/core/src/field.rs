//! Field realizations and the cosine-wave summation shared by both methods.

use std::sync::Arc;

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::model::{GneitingModel, SpaceTimePointSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Spectral,
    Substitution,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Spectral => "spectral",
            Method::Substitution => "substitution",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: u64,
    pub realization: u32,
    pub method: Method,
    pub p: usize,
    pub model_hash: String,
    pub version: String,
}

impl Provenance {
    pub fn new(model: &GneitingModel, method: Method, p: usize, seed: u64, realization: u32) -> Self {
        Self {
            seed,
            realization,
            method,
            p,
            model_hash: model_hash(model),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

/// SHA-256 of the model's canonical JSON encoding, hex encoded.
pub fn model_hash(model: &GneitingModel) -> String {
    let bytes = serde_json::to_vec(model).expect("model serializes");
    hex::encode(Sha256::digest(&bytes))
}

/// Simulated values on a point set, in point order.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldRealization {
    pub points: Arc<SpaceTimePointSet>,
    pub values: Vec<f64>,
    pub provenance: Provenance,
}

impl FieldRealization {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Maps every point to an index into a list of distinct time instants.
pub(crate) struct TimeSlots {
    pub times: Vec<f64>,
    pub of_point: Vec<usize>,
}

impl TimeSlots {
    pub fn new(points: &SpaceTimePointSet) -> Self {
        if let Some(g) = points.grid() {
            let nt = g.counts[g.k()];
            let per = g.slice_len();
            return Self {
                times: g.times(),
                of_point: (0..nt).flat_map(|m| std::iter::repeat_n(m, per)).collect(),
            };
        }
        let times = points.distinct_times();
        let of_point = points
            .times()
            .iter()
            .map(|t| times.binary_search_by(|s| s.total_cmp(t)).expect("time listed"))
            .collect();
        Self { times, of_point }
    }
}

/// `Σⱼ amps[j] · cos(⟨freqs[j], x⟩ + phase(j, slot(t)))` at every point.
///
/// `freqs` is `p×k` row-major. Each output value is accumulated over `j` in
/// order, independently of how the work is split across threads.
pub(crate) fn sum_waves<F>(
    points: &SpaceTimePointSet,
    slots: &TimeSlots,
    freqs: &[f64],
    amps: &[f64],
    phase: F,
) -> Vec<f64>
where
    F: Fn(usize, usize) -> f64 + Sync,
{
    match points.grid() {
        Some(_) => sum_waves_grid(points, freqs, amps, &phase),
        None => sum_waves_scattered(points, slots, freqs, amps, &phase),
    }
}

const SCATTER_CHUNK: usize = 256;

fn sum_waves_scattered<F>(
    points: &SpaceTimePointSet,
    slots: &TimeSlots,
    freqs: &[f64],
    amps: &[f64],
    phase: &F,
) -> Vec<f64>
where
    F: Fn(usize, usize) -> f64 + Sync,
{
    let k = points.k();
    let mut out = vec![0.0; points.len()];
    let fill = |start: usize, chunk: &mut [f64]| {
        for (off, v) in chunk.iter_mut().enumerate() {
            let i = start + off;
            let x = points.spatial(i);
            let slot = slots.of_point[i];
            let mut acc = 0.0;
            for (j, (w, a)) in freqs.chunks_exact(k).zip(amps).enumerate() {
                let dot: f64 = w.iter().zip(x).map(|(w, x)| w * x).sum();
                acc += a * (dot + phase(j, slot)).cos();
            }
            *v = acc;
        }
    };
    for_each_chunk(&mut out, SCATTER_CHUNK, fill);
    out
}

/// Separable evaluation on a regular grid: `e^{i⟨ω,x⟩}` factors into
/// per-axis phasors, so each component costs two multiply-adds per node.
fn sum_waves_grid<F>(points: &SpaceTimePointSet, freqs: &[f64], amps: &[f64], phase: &F) -> Vec<f64>
where
    F: Fn(usize, usize) -> f64 + Sync,
{
    let g = points.grid().expect("grid point set");
    let k = g.k();
    let p = amps.len();
    let axes: Vec<Vec<f64>> = (0..k).map(|d| g.axis(d)).collect();
    let offsets: Vec<usize> = axes
        .iter()
        .scan(0, |acc, a| {
            let o = *acc;
            *acc += a.len();
            Some(o)
        })
        .collect();
    let stride: usize = axes.iter().map(Vec::len).sum();
    // phasors[j * stride + offsets[d] + i] = e^{i ω_jd x_d,i}
    let mut re = vec![0.0; p * stride];
    let mut im = vec![0.0; p * stride];
    for j in 0..p {
        for d in 0..k {
            let w = freqs[j * k + d];
            for (i, x) in axes[d].iter().enumerate() {
                let (s, c) = (w * x).sin_cos();
                re[j * stride + offsets[d] + i] = c;
                im[j * stride + offsets[d] + i] = s;
            }
        }
    }
    let n1 = axes[0].len();
    let slice = g.slice_len();
    let rows = slice / n1;
    let mut out = vec![0.0; g.len()];
    let fill = |m: usize, chunk: &mut [f64]| {
        let mut idx = vec![0usize; k];
        for (j, &amp) in amps.iter().enumerate() {
            let (s, c) = phase(j, m).sin_cos();
            let base = j * stride;
            let e1r = &re[base..base + n1];
            let e1i = &im[base..base + n1];
            idx.iter_mut().for_each(|v| *v = 0);
            for row in 0..rows {
                let (mut cr, mut ci) = (amp * c, amp * s);
                for d in 1..k {
                    let o = base + offsets[d] + idx[d];
                    let (pr, pi) = (re[o], im[o]);
                    (cr, ci) = (cr * pr - ci * pi, cr * pi + ci * pr);
                }
                let dst = &mut chunk[row * n1..(row + 1) * n1];
                for ((v, a), b) in dst.iter_mut().zip(e1r).zip(e1i) {
                    *v += cr * a - ci * b;
                }
                for d in 1..k {
                    idx[d] += 1;
                    if idx[d] < axes[d].len() {
                        break;
                    }
                    idx[d] = 0;
                }
            }
        }
    };
    for_each_slice(&mut out, slice, fill);
    out
}

fn for_each_chunk<F>(out: &mut [f64], chunk: usize, f: F)
where
    F: Fn(usize, &mut [f64]) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    out.par_chunks_mut(chunk)
        .enumerate()
        .for_each(|(c, s)| f(c * chunk, s));
    #[cfg(not(feature = "parallel"))]
    out.chunks_mut(chunk)
        .enumerate()
        .for_each(|(c, s)| f(c * chunk, s));
}

fn for_each_slice<F>(out: &mut [f64], slice: usize, f: F)
where
    F: Fn(usize, &mut [f64]) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    out.par_chunks_mut(slice).enumerate().for_each(|(m, s)| f(m, s));
    #[cfg(not(feature = "parallel"))]
    out.chunks_mut(slice).enumerate().for_each(|(m, s)| f(m, s));
}
