use gneiting::distributions::RngStream;
use gneiting::model::{SamplerStrategy, TableId, VariogramSpec};
use gneiting::spectral::{TemporalSampler, DEFAULT_EPS};
use gneiting::validation::{transform_oracle, Transform};

const U_GRID: [f64; 8] = [0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 8.0];
const LAMBDAS: [f64; 3] = [0.1, 1.0, 10.0];
const N: usize = 100_000;

fn check(spec: &VariogramSpec, strategy: SamplerStrategy, seed: u64) -> Vec<String> {
    let sampler = TemporalSampler::with_strategy(spec, strategy, DEFAULT_EPS).unwrap();
    let mut failures = vec![];
    for (i, &lambda) in LAMBDAS.iter().enumerate() {
        let mut rng = RngStream::new(seed, i as u64);
        let r = transform_oracle(
            || sampler.sample(lambda, &mut rng),
            |u| (-lambda * spec.evaluate(u)).exp(),
            Transform::Characteristic,
            &U_GRID,
            N,
        );
        eprintln!(
            "{:<28} {:<20} λ={lambda:<5} max err {:.5} (tol {:.5})",
            spec.family_name(),
            strategy.name(),
            r.max_abs_error,
            r.tolerance
        );
        if !r.pass {
            failures.push(format!("{} {} λ={lambda}: {:?}", spec.family_name(), strategy.name(), r.errors));
        }
    }
    failures
}

#[test]
fn table_entries_generic_shot_noise() {
    let mut failures = vec![];
    for (i, id) in TableId::ALL.into_iter().enumerate() {
        let alphas: &[Option<f64>] = if id == TableId::Power { &[Some(0.5), Some(1.0), Some(1.5)] } else { &[None] };
        for a in alphas {
            let spec = VariogramSpec::table(id, *a).unwrap();
            failures.extend(check(&spec, SamplerStrategy::ShotNoiseGeneric, 100 + i as u64));
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}
