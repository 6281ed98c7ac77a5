//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails. Seeds are fixed.

use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use gneiting::cli_io::{parse_config, run, validate};
use gneiting::distributions::{log_shot_noise_terms, sample_tilted_stable, RngStream};
use gneiting::field::FieldRealization;
use gneiting::model::{
    GneitingModel, GridSpec, MixtureMeasure, SamplerStrategy, SpaceTimePointSet, TableId,
    VariogramSpec,
};
use gneiting::spectral::{
    build_spectral_ensemble, build_spectral_ensemble_with, log_shot_noise_truncated,
    SpectralOptions, TemporalSampler,
};
use gneiting::substitution::{
    build_substitution_ensemble, build_substitution_ensemble_with, SubstitutionOptions,
};
use gneiting::validation::{
    detect_dimple, ks_two_sample, normality_report, transform_oracle, Transform,
};

const N: usize = 100_000;

type Criterion = fn() -> (bool, String);
type CfCase = (VariogramSpec, SamplerStrategy, Box<dyn Fn(f64) -> f64>);

fn manifest_dir() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

fn fig1() -> GneitingModel {
    GneitingModel::new(
        2,
        MixtureMeasure::dirac(0.01).unwrap(),
        VariogramSpec::linear(1.0).unwrap(),
    )
    .unwrap()
}

fn fig3() -> GneitingModel {
    GneitingModel::new(
        2,
        MixtureMeasure::dirac(0.01).unwrap(),
        VariogramSpec::cauchy_class(1.0, 1.0, 0.5).unwrap(),
    )
    .unwrap()
}

/// Fig. 3 covariance written out directly: γ(u) = √(1+|u|) − 1, k = 2.
fn fig3_cov(h2: f64, u: f64) -> f64 {
    let g1 = (1.0 + u.abs()).sqrt();
    (-0.01 * h2 / g1).exp() / g1
}

fn fig3_config(method: &str) -> String {
    let times: Vec<String> = (0..50).map(|i| format!("{}", i as f64 * 0.2)).collect();
    format!(
        r#"
method = "{method}"
p = 2000
seed = 31
realizations = 50
instants = [{}]

[model]
k = 2
[model.mixture]
kind = "dirac"
r = 0.01
[model.variogram]
family = "cauchy_class"
a = 1.0
alpha = 1.0
beta = 0.5

[grid]
origin = [0.0, 0.0, 0.0]
mesh = [1.0, 1.0, 0.2]
counts = [60, 60, 50]
"#,
        times.join(", ")
    )
}

fn criterion_1() -> (bool, String) {
    let mut detail = vec![];
    let mut ok = true;
    for method in ["spectral", "substitution"] {
        let t = Instant::now();
        let config = parse_config(&fig3_config(method)).unwrap();
        let curves = validate(&config, None).unwrap();
        let mut worst: f64 = 0.0;
        let mut fails = 0;
        for c in &curves {
            for r in &c.rows {
                // theory recomputed independently of the library
                let th = match c.name.strip_prefix("spatial_u") {
                    Some(u) => 1.0 - fig3_cov(r.lag * r.lag, u.parse().unwrap()),
                    None => {
                        let h: f64 = c.name.rsplit('_').next().unwrap().parse().unwrap();
                        1.0 - fig3_cov(2.0 * h * h, r.lag)
                    }
                };
                assert!((th - r.theory).abs() < 1e-12, "{} lag {}", c.name, r.lag);
                let z = (r.mean - th).abs() / r.std_error;
                worst = worst.max(z);
                if !r.within_band {
                    fails += 1;
                }
            }
        }
        let lags: usize = curves.iter().map(|c| c.rows.len()).sum();
        ok &= fails == 0;
        detail.push(format!(
            "{method}: {fails}/{lags} lags outside 3 se, worst {worst:.2} se, {:.0}s",
            t.elapsed().as_secs_f64()
        ));
    }
    (ok, detail.join("; "))
}

fn criterion_2() -> (bool, String) {
    let u_grid = [0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 8.0];
    let ln_a2 = (2.06f64 * 2.06).ln();
    let suites: Vec<CfCase> = vec![
        (
            VariogramSpec::linear(1.0).unwrap(),
            SamplerStrategy::DirectCauchy,
            Box::new(|u: f64| u.abs()),
        ),
        (
            VariogramSpec::logarithmic(2.06).unwrap(),
            SamplerStrategy::GammaMixture,
            Box::new(move |u: f64| (1.0 + u * u / (2.06 * 2.06)).ln() / ln_a2),
        ),
        (
            VariogramSpec::cauchy_class(1.0, 1.0, 0.5).unwrap(),
            SamplerStrategy::StableMixture,
            Box::new(|u: f64| (1.0 + u.abs()).sqrt() - 1.0),
        ),
        (
            VariogramSpec::table(TableId::BoundedExponential, None).unwrap(),
            SamplerStrategy::CompoundPoisson,
            Box::new(|u: f64| 1.0 - (-u.abs()).exp()),
        ),
        (
            VariogramSpec::logarithmic(2.06).unwrap(),
            SamplerStrategy::ShotNoiseGeneric,
            Box::new(move |u: f64| (1.0 + u * u / (2.06 * 2.06)).ln() / ln_a2),
        ),
    ];
    let t = Instant::now();
    let mut ok = true;
    let mut worst: f64 = 0.0;
    let mut stream = 200;
    for (spec, strategy, gamma) in &suites {
        let sampler = TemporalSampler::with_strategy(spec, *strategy, 0.01).unwrap();
        for lambda in [0.1, 1.0, 10.0] {
            stream += 1;
            let mut rng = RngStream::new(2, stream);
            let r = transform_oracle(
                || sampler.sample(lambda, &mut rng),
                |u| (-lambda * gamma(u)).exp(),
                Transform::Characteristic,
                &u_grid,
                N,
            );
            if !r.pass {
                println!("  cf {} lambda={lambda}: {:.5}", strategy.name(), r.max_abs_error);
            }
            ok &= r.pass;
            worst = worst.max(r.max_abs_error);
        }
    }
    (
        ok,
        format!(
            "15 sampler/lambda cases, worst error {worst:.5} vs {:.5}, {:.0}s",
            4.0 / (N as f64).sqrt(),
            t.elapsed().as_secs_f64()
        ),
    )
}

fn criterion_3() -> (bool, String) {
    let mut ok = true;
    let mut worst: f64 = 0.0;
    let mut stream = 300;
    for beta in [0.5f64, 0.9] {
        for tilt in [0.0f64, 1.0, 100.0] {
            stream += 1;
            let mut rng = RngStream::new(3, stream);
            let r = transform_oracle(
                || sample_tilted_stable(beta, tilt, &mut rng).unwrap(),
                |s| (tilt.powf(beta) - (tilt + s).powf(beta)).exp(),
                Transform::Laplace,
                &[0.5, 1.0, 2.0],
                N,
            );
            ok &= r.pass;
            worst = worst.max(r.max_abs_error);
        }
    }
    let mu = MixtureMeasure::sqrt_gamma_half(0.01).unwrap();
    let mut rng = RngStream::new(3, 399);
    let r = transform_oracle(
        || mu.sample(&mut rng),
        |t| (-0.01 * t.sqrt()).exp(),
        Transform::Laplace,
        &[1.0, 100.0, 1e4],
        N,
    );
    ok &= r.pass;
    (
        ok,
        format!(
            "tilted stable worst {worst:.5}, sqrt-gamma-half {:.5}, tolerance {:.5}",
            r.max_abs_error,
            4.0 / (N as f64).sqrt()
        ),
    )
}

fn criterion_4() -> (bool, String) {
    let (a, eps) = (2.06f64, 0.01f64);
    let mut ok = true;
    let mut detail = vec![];
    for c in [1.0f64, 5.0] {
        let n0 = (-eps.ln() / (1.0 + 2.0 / c).ln()).ceil() as usize;
        ok &= log_shot_noise_terms(c, eps) == n0;
        let mut rng = RngStream::new(4, c as u64);
        let draws: Vec<f64> = (0..N).map(|_| log_shot_noise_truncated(a, c, eps, &mut rng)).collect();
        let mean = draws.iter().sum::<f64>() / N as f64;
        let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (N - 1) as f64;
        let target = c / (a * a) * (1.0 - (c / (c + 2.0)).powi(n0 as i32));
        let rel = (var / target - 1.0).abs();
        ok &= rel <= 0.05;
        detail.push(format!("c={c}: n0={n0} rel.err {:.2}%", 100.0 * rel));
    }
    (ok, detail.join("; "))
}

fn criterion_5() -> (bool, String) {
    let t = Instant::now();
    let mixtures = [
        MixtureMeasure::dirac(0.01).unwrap(),
        MixtureMeasure::sqrt_gamma_half(0.01).unwrap(),
        MixtureMeasure::tabulated(vec![(0.0, 0.2), (0.05, 0.5), (0.3, 0.3)]).unwrap(),
    ];
    let mut grams = vec![
        VariogramSpec::linear(1.0).unwrap(),
        VariogramSpec::fractional_power(0.7).unwrap(),
        VariogramSpec::logarithmic(2.06).unwrap(),
        VariogramSpec::cauchy_class(1.0, 1.0, 0.5).unwrap(),
    ];
    for id in TableId::ALL {
        grams.push(VariogramSpec::table(id, (id == TableId::Power).then_some(1.5)).unwrap());
    }
    // 10 probe pairs: (x, t) and (x + h, t + u)
    let probes: [([f64; 2], f64, [f64; 2], f64); 10] = [
        ([0.0, 0.0], 0.0, [0.0, 0.0], 0.0),
        ([0.0, 0.0], 0.0, [3.0, 0.0], 0.0),
        ([0.0, 0.0], 0.0, [0.0, 0.0], 0.5),
        ([0.0, 0.0], 0.0, [4.0, 4.0], 0.5),
        ([1.0, 2.0], 0.5, [0.0, 6.0], 1.5),
        ([1.0, 2.0], 0.5, [10.0, 0.0], 3.0),
        ([5.0, 5.0], 1.5, [-2.0, 1.0], -1.0),
        ([5.0, 5.0], 1.5, [7.0, -7.0], 2.5),
        ([-3.0, 0.0], 4.0, [1.0, 1.0], -3.5),
        ([-3.0, 0.0], 4.0, [0.0, 0.0], -4.0),
    ];
    let mut spatial = vec![];
    let mut times = vec![];
    for (x, t, h, u) in &probes {
        spatial.extend_from_slice(x);
        times.push(*t);
        spatial.extend([x[0] + h[0], x[1] + h[1]]);
        times.push(t + u);
    }
    let points = Arc::new(SpaceTimePointSet::from_points(2, spatial, times).unwrap());
    let instants = points.distinct_times();
    let ensembles = 50u32;
    let mut fails = 0;
    let mut total = 0;
    let mut sample_se_fails = 0;
    let mut worst: f64 = 0.0;
    for (mi, gamma) in grams.iter().enumerate() {
        let mu = mixtures[mi % mixtures.len()].clone();
        let model = GneitingModel::new(2, mu, gamma.clone()).unwrap();
        let fields: Vec<FieldRealization> = (0..ensembles)
            .map(|r| {
                let opts = SubstitutionOptions {
                    realization: r,
                    ..Default::default()
                };
                build_substitution_ensemble_with(&model, &instants, 2000, 5_000 + mi as u64, opts)
                    .unwrap()
                    .evaluate(points.clone())
                    .unwrap()
            })
            .collect();
        for (i, (_, _, h, u)) in probes.iter().enumerate() {
            let prods: Vec<f64> = fields.iter().map(|f| f.values[2 * i] * f.values[2 * i + 1]).collect();
            let n = prods.len() as f64;
            let mean = prods.iter().sum::<f64>() / n;
            let theory = model.covariance(h, *u).unwrap();
            // Var[XY] = 1 + C² for a unit-variance Gaussian pair
            let se = ((1.0 + theory * theory) / n).sqrt();
            let z = (mean - theory).abs() / se;
            let sd = (prods.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
            if (mean - theory).abs() > 3.0 * sd / n.sqrt() {
                sample_se_fails += 1;
            }
            worst = worst.max(z);
            total += 1;
            if z > 3.0 {
                fails += 1;
                println!(
                    "  cov {} / {}: probe {i} mean {mean:.4} theory {theory:.4} ({z:.2} se)",
                    gamma.family_name(),
                    model.mixture().label()
                );
            }
        }
    }
    (
        fails == 0,
        format!(
            "{fails}/{total} probes outside 3 se over {} models, worst {worst:.2} se \
             ({sample_se_fails} outside 3 sample-estimated se), {:.0}s",
            grams.len(),
            t.elapsed().as_secs_f64()
        ),
    )
}

/// 1000 points 40 units apart at t = 0 and t = 0.6, far beyond the
/// correlation range of the Fig. 1 model.
fn sparse_grid() -> Arc<SpaceTimePointSet> {
    let g = GridSpec::new(vec![0.0, 0.0, 0.0], vec![40.0, 40.0, 0.6], vec![25, 20, 2]).unwrap();
    Arc::new(SpaceTimePointSet::from_grid(g))
}

fn criterion_6() -> (bool, String) {
    let model = fig1();
    let points = sparse_grid();
    let instants = points.distinct_times();
    let spectral = |p: usize| -> Vec<FieldRealization> {
        (0..10)
            .map(|r| {
                let opts = SpectralOptions {
                    realization: r,
                    ..Default::default()
                };
                build_spectral_ensemble_with(&model, p, 61, opts)
                    .unwrap()
                    .evaluate(points.clone())
                    .unwrap()
            })
            .collect()
    };
    let substitution = |p: usize| -> Vec<FieldRealization> {
        (0..10)
            .map(|r| {
                let opts = SubstitutionOptions {
                    realization: r,
                    ..Default::default()
                };
                build_substitution_ensemble_with(&model, &instants, p, 62, opts)
                    .unwrap()
                    .evaluate(points.clone())
                    .unwrap()
            })
            .collect()
    };
    let a = normality_report(&spectral(5000));
    let b = normality_report(&substitution(5000));
    let ctl_a = normality_report(&spectral(1));
    let ctl_b = normality_report(&substitution(1));
    let ok = a.pass && b.pass && !ctl_a.pass && !ctl_b.pass;
    (
        ok,
        format!(
            "n={} AD spectral {:.3}, substitution {:.3} (crit 3.857); p=1 control AD {:.1}, {:.1}",
            a.n, a.ad_statistic, b.ad_statistic, ctl_a.ad_statistic, ctl_b.ad_statistic
        ),
    )
}

fn criterion_7() -> (bool, String) {
    let model = fig3();
    let grid: Vec<f64> = (0..=500).map(|i| i as f64 * 0.01).collect();
    let far = detect_dimple(&model, &[10.0, 10.0], &grid).unwrap();
    let near = detect_dimple(&model, &[0.1, 0.1], &grid).unwrap();
    // closed form: u ↦ C is maximal where √(1+u) = 0.01·|h|², i.e. u = 3 for |h|² = 200
    let ok = far.has_dimple && !near.has_dimple && (far.argmax_u - 3.0).abs() < 1e-9;
    (
        ok,
        format!(
            "h=(10,10): dimple {} at u={}; h=(0.1,0.1): dimple {}",
            far.has_dimple, far.argmax_u, near.has_dimple
        ),
    )
}

fn criterion_8() -> (bool, String) {
    let model = fig1();
    let p = 5000;
    let spec = build_spectral_ensemble(&model, p, 81).unwrap();
    let sub = build_substitution_ensemble(&model, &[0.0, 1.0], p, 82).unwrap();
    let a: Vec<f64> = spec
        .components()
        .iter()
        .map(|c| c.omega.iter().map(|w| w * w).sum())
        .collect();
    let b: Vec<f64> = sub
        .components()
        .iter()
        .map(|c| 2.0 * c.r * c.omega_tilde.iter().map(|w| w * w).sum::<f64>())
        .collect();
    let r = ks_two_sample(&a, &b);
    (r.pass, format!("{p} + {p} samples, D={:.4}, p-value {:.3}", r.statistic, r.p_value))
}

fn criterion_9() -> (bool, String) {
    let text = std::fs::read_to_string(manifest_dir().join("../../configs/fig1.toml")).unwrap();
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let mut outputs = vec![];
    for d in &dirs {
        let mut config = parse_config(&text).unwrap();
        config.realizations = 2;
        config.out = d.path().to_path_buf();
        let m = run(&config).unwrap();
        let files: Vec<(String, Vec<u8>)> = m
            .files
            .iter()
            .chain(std::iter::once(&"manifest.json".to_string()))
            .map(|f| (f.clone(), std::fs::read(d.path().join(f)).unwrap()))
            .collect();
        outputs.push(files);
    }
    let bytes: usize = outputs[0].iter().map(|(_, b)| b.len()).sum();
    let ok = outputs[0] == outputs[1] && outputs[0].len() == 5;
    (ok, format!("{} files, {bytes} bytes compared", outputs[0].len()))
}

fn main() {
    let criteria: [(&str, Criterion); 9] = [
        ("variogram reproduction", criterion_1),
        ("characteristic-function oracles", criterion_2),
        ("Laplace oracles", criterion_3),
        ("shot-noise truncation", criterion_4),
        ("substitution covariance oracle", criterion_5),
        ("Gaussian marginals", criterion_6),
        ("dimple", criterion_7),
        ("frequency cross-consistency", criterion_8),
        ("determinism", criterion_9),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        if only.is_some_and(|o| o != i + 1) {
            continue;
        }
        let (ok, detail) = f();
        if !ok {
            failed += 1;
        }
        println!("criterion {} {name}: {} ({detail})", i + 1, if ok { "PASS" } else { "FAIL" });
    }
    if failed > 0 {
        println!("{failed} acceptance criterion/criteria failed");
        std::process::exit(1);
    }
}
