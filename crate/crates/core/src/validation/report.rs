use std::io::{self, Write};

use serde::Serialize;

use super::{EmpiricalVariogram, ValidationError};

/// One lag of a mean-of-realizations variogram against its theoretical value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VariogramRow {
    pub lag: f64,
    pub mean: f64,
    /// Standard error of the mean across realizations.
    pub std_error: f64,
    pub theory: f64,
    pub within_band: bool,
}

/// Averages realizations lag by lag and checks `|mean - theory| ≤ band·se`.
/// A lag with zero spread passes only on an exact match.
pub fn compare_variograms(
    realizations: &[EmpiricalVariogram],
    theory: impl Fn(f64) -> f64,
    band: f64,
) -> Result<Vec<VariogramRow>, ValidationError> {
    let first = realizations.first().ok_or(ValidationError::Empty)?;
    if realizations.iter().any(|v| v.lag_axis != first.lag_axis) {
        return Err(ValidationError::IncompatibleLags);
    }
    let n = realizations.len() as f64;
    Ok(first
        .lag_axis
        .iter()
        .enumerate()
        .map(|(i, &lag)| {
            let mean = realizations.iter().map(|v| v.values[i]).sum::<f64>() / n;
            let var = if realizations.len() > 1 {
                realizations
                    .iter()
                    .map(|v| (v.values[i] - mean).powi(2))
                    .sum::<f64>()
                    / (n - 1.0)
            } else {
                0.0
            };
            let std_error = (var / n).sqrt();
            let th = theory(lag);
            VariogramRow {
                lag,
                mean,
                std_error,
                theory: th,
                within_band: (mean - th).abs() <= band * std_error,
            }
        })
        .collect())
}

pub fn write_variogram_csv<W: Write>(rows: &[VariogramRow], band: f64, mut out: W) -> io::Result<()> {
    writeln!(out, "lag,empirical_mean,band_low,band_high,theory")?;
    for r in rows {
        writeln!(
            out,
            "{},{:.10e},{:.10e},{:.10e},{:.10e}",
            r.lag,
            r.mean,
            r.mean - band * r.std_error,
            r.mean + band * r.std_error,
            r.theory
        )?;
    }
    Ok(())
}

pub fn write_variogram_text<W: Write>(title: &str, rows: &[VariogramRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{title}")?;
    writeln!(out, "{:>8} {:>12} {:>12} {:>12} {:>6}", "lag", "mean", "se", "theory", "ok")?;
    for r in rows {
        writeln!(
            out,
            "{:>8.3} {:>12.6} {:>12.6} {:>12.6} {:>6}",
            r.lag, r.mean, r.std_error, r.theory, r.within_band
        )?;
    }
    Ok(())
}
