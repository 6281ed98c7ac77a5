use serde::Serialize;

/// Which transform the oracle estimates: `E[e^{iuX}]` or `E[e^{-sX}]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Transform {
    Characteristic,
    Laplace,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleReport {
    pub args: Vec<f64>,
    pub errors: Vec<f64>,
    pub max_abs_error: f64,
    pub tolerance: f64,
    pub n_draws: usize,
    pub pass: bool,
}

/// Compares the Monte-Carlo transform of `n_draws` samples with `analytic`
/// at each argument. Characteristic-function errors are complex moduli.
/// Passes iff the largest error is at most `4/√n_draws`.
pub fn transform_oracle<S, A>(
    mut sampler: S,
    analytic: A,
    kind: Transform,
    args: &[f64],
    n_draws: usize,
) -> OracleReport
where
    S: FnMut() -> f64,
    A: Fn(f64) -> f64,
{
    let draws: Vec<f64> = (0..n_draws).map(|_| sampler()).collect();
    let n = n_draws.max(1) as f64;
    let errors: Vec<f64> = args
        .iter()
        .map(|&a| match kind {
            Transform::Characteristic => {
                let (mut re, mut im) = (0.0, 0.0);
                for x in &draws {
                    let (s, c) = (a * x).sin_cos();
                    re += c;
                    im += s;
                }
                (re / n - analytic(a)).hypot(im / n)
            }
            Transform::Laplace => {
                let m = draws.iter().map(|x| (-a * x).exp()).sum::<f64>() / n;
                (m - analytic(a)).abs()
            }
        })
        .collect();
    let max_abs_error = errors.iter().copied().fold(0.0, f64::max);
    let tolerance = 4.0 / n.sqrt();
    OracleReport {
        args: args.to_vec(),
        errors,
        max_abs_error,
        tolerance,
        n_draws,
        pass: max_abs_error <= tolerance,
    }
}
