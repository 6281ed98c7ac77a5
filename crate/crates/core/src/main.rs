use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gneiting::cli_io::{self, exit_code, parse_config, OutputFormat, RunConfig, RunError};
use gneiting::distributions::RngStream;
use gneiting::model::{MixtureMeasure, SamplerStrategy, TableId, VariogramSpec};
use gneiting::spectral::TemporalSampler;
use gneiting::validation::{detect_dimple, transform_oracle, Transform};

#[derive(Parser)]
#[command(name = "gneiting", version, about = "Space-time Gaussian random fields with Gneiting covariances")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Run configuration (TOML)
    #[arg(long)]
    config: PathBuf,
    /// Overrides the configured seed
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
    /// Overrides the configured number of realizations
    #[arg(long)]
    realizations: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate field realizations and write them to disk
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = ["csv", "raw"])]
        format: Option<String>,
    },
    /// Compare mean empirical variograms with the model
    Validate {
        #[command(flatten)]
        common: Common,
    },
    /// Run the characteristic-function and Laplace oracle suites
    Oracle {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        draws: usize,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Scan u -> C(h, u) for a hole effect
    Dimple {
        #[arg(long)]
        config: PathBuf,
        /// Spatial lag, comma separated
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        h: Vec<f64>,
        #[arg(long, default_value_t = 5.0)]
        u_max: f64,
        #[arg(long, default_value_t = 0.01)]
        u_step: f64,
    },
}

fn set_threads(n: Option<usize>) {
    #[cfg(feature = "parallel")]
    if let Some(n) = n {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = n;
}

fn load(common: &Common) -> Result<RunConfig, RunError> {
    let text = std::fs::read_to_string(&common.config)
        .map_err(|e| RunError::Io(format!("{}: {e}", common.config.display())))?;
    let mut config = parse_config(&text)?;
    if let Some(s) = common.seed {
        config.seed = s;
    }
    if let Some(o) = &common.out {
        config.out = o.clone();
    }
    if let Some(r) = common.realizations {
        if r == 0 {
            return Err(RunError::Config("--realizations must be at least 1".into()));
        }
        config.realizations = r;
    }
    set_threads(common.threads);
    Ok(config)
}

fn oracle_suite(seed: u64, draws: usize) -> bool {
    let u_grid = [0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 8.0];
    let specs = [
        VariogramSpec::linear(1.0).unwrap(),
        VariogramSpec::logarithmic(2.06).unwrap(),
        VariogramSpec::cauchy_class(1.0, 1.0, 0.5).unwrap(),
        VariogramSpec::table(TableId::BoundedExponential, None).unwrap(),
        VariogramSpec::logarithmic(2.06)
            .unwrap()
            .with_strategy(SamplerStrategy::ShotNoiseGeneric)
            .unwrap(),
    ];
    let mut all = true;
    let mut stream = 0;
    for spec in &specs {
        let sampler = TemporalSampler::new(spec, 0.01).expect("supported strategy");
        for lambda in [0.1, 1.0, 10.0] {
            stream += 1;
            let mut rng = RngStream::new(seed, stream);
            let r = transform_oracle(
                || sampler.sample(lambda, &mut rng),
                |u| (-lambda * spec.evaluate(u)).exp(),
                Transform::Characteristic,
                &u_grid,
                draws,
            );
            all &= r.pass;
            println!(
                "{} cf {:<18} {:<20} lambda={lambda:<5} max_err={:.5} tol={:.5}",
                if r.pass { "PASS" } else { "FAIL" },
                spec.family_name(),
                spec.strategy().name(),
                r.max_abs_error,
                r.tolerance
            );
        }
    }
    for beta in [0.5, 0.9] {
        for tilt in [0.0, 1.0, 100.0] {
            stream += 1;
            let mut rng = RngStream::new(seed, stream);
            let r = transform_oracle(
                || gneiting::distributions::sample_tilted_stable(beta, tilt, &mut rng).unwrap(),
                |s| (f64::powf(tilt, beta) - (tilt + s).powf(beta)).exp(),
                Transform::Laplace,
                &[0.5, 1.0, 2.0],
                draws,
            );
            all &= r.pass;
            println!(
                "{} laplace tilted_stable beta={beta} tilt={tilt} max_err={:.5} tol={:.5}",
                if r.pass { "PASS" } else { "FAIL" },
                r.max_abs_error,
                r.tolerance
            );
        }
    }
    stream += 1;
    let mut rng = RngStream::new(seed, stream);
    let mu = MixtureMeasure::sqrt_gamma_half(0.01).unwrap();
    let r = transform_oracle(
        || mu.sample(&mut rng),
        |t| (-0.01 * t.sqrt()).exp(),
        Transform::Laplace,
        &[1.0, 100.0, 1e4],
        draws,
    );
    all &= r.pass;
    println!(
        "{} laplace sqrt_gamma_half c=0.01 max_err={:.5} tol={:.5}",
        if r.pass { "PASS" } else { "FAIL" },
        r.max_abs_error,
        r.tolerance
    );
    all
}

fn main_inner(cli: Cli) -> Result<i32, RunError> {
    match cli.command {
        Command::Simulate { common, format } => {
            let mut config = load(&common)?;
            if let Some(f) = format {
                config.format = OutputFormat::parse(&f).expect("validated by clap");
            }
            let m = cli_io::run(&config)?;
            println!("wrote {} file(s) to {}", m.files.len() + 1, config.out.display());
            Ok(exit_code::SUCCESS)
        }
        Command::Validate { common } => {
            let config = load(&common)?;
            let curves = cli_io::validate(&config, Some(&config.out))?;
            let mut all = true;
            for c in &curves {
                let ok = c.pass();
                all &= ok;
                let worst = c
                    .rows
                    .iter()
                    .map(|r| (r.mean - r.theory).abs() / r.std_error.max(f64::MIN_POSITIVE))
                    .fold(0.0, f64::max);
                println!("{} {:<24} worst |mean-theory|/se = {worst:.2}", if ok { "PASS" } else { "FAIL" }, c.name);
            }
            println!("reports in {}", config.out.display());
            Ok(if all { exit_code::SUCCESS } else { exit_code::NUMERICAL })
        }
        Command::Oracle { seed, draws, threads } => {
            set_threads(threads);
            Ok(if oracle_suite(seed, draws) { exit_code::SUCCESS } else { exit_code::NUMERICAL })
        }
        Command::Dimple { config, h, u_max, u_step } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| RunError::Io(format!("{}: {e}", config.display())))?;
            let config = parse_config(&text)?;
            if !(u_step > 0.0 && u_max >= 0.0) {
                return Err(RunError::Config("--u-step must be positive and --u-max nonnegative".into()));
            }
            let n = (u_max / u_step).round() as usize;
            let grid: Vec<f64> = (0..=n).map(|i| i as f64 * u_step).collect();
            let r = detect_dimple(&config.model, &h, &grid).map_err(|e| RunError::Config(e.to_string()))?;
            println!(
                "has_dimple={} argmax_u={} C(h,0)={:.9} max C(h,u)={:.9}",
                r.has_dimple, r.argmax_u, r.covariance_at_zero, r.max_covariance
            );
            Ok(exit_code::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_inner(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
