use std::collections::BTreeSet;
use std::fmt;
use std::path::PathBuf;

use toml::{Table, Value};

use crate::field::Method;
use crate::model::{
    GneitingModel, GridSpec, MixtureKind, MixtureMeasure, ModelError, SamplerStrategy,
    SpaceTimePointSet, TableId, VariogramFamily, VariogramSpec,
};
use crate::spectral::DEFAULT_EPS;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Raw,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "csv" => Some(Self::Csv),
            "raw" => Some(Self::Raw),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Csv => "csv",
            Self::Raw => "raw",
        }
    }
}

/// Lags scanned by the `validate` protocol.
#[derive(Clone, Debug, PartialEq)]
pub struct ValidateSpec {
    pub u_values: Vec<f64>,
    pub spatial_lags: Vec<f64>,
    pub h_values: Vec<Vec<f64>>,
    pub temporal_lags: Vec<f64>,
    pub band: f64,
}

impl ValidateSpec {
    fn defaults(k: usize) -> Self {
        Self {
            u_values: vec![0.0, 0.2, 1.6],
            spatial_lags: (1..=20).map(f64::from).collect(),
            h_values: [0.0, 6.0, 10.0].iter().map(|&h| vec![h; k]).collect(),
            temporal_lags: (1..=20).map(|i| 0.2 * f64::from(i)).collect(),
            band: 3.0,
        }
    }
}

/// A validated run description.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub model: GneitingModel,
    pub method: Method,
    pub p: usize,
    pub points: SpaceTimePointSet,
    pub instants: Option<Vec<f64>>,
    pub seed: u64,
    pub eps: f64,
    pub realizations: u32,
    pub out: PathBuf,
    pub format: OutputFormat,
    pub validate: ValidateSpec,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConfigIssue {
    pub field: String,
    pub message: String,
}

/// Every problem found in a configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct ConfigError {
    pub issues: Vec<ConfigIssue>,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "invalid configuration ({} problem(s)):", self.issues.len())?;
        for i in &self.issues {
            writeln!(f, "  {}: {}", i.field, i.message)?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigError {}

struct Issues(Vec<ConfigIssue>);

impl Issues {
    fn push(&mut self, field: impl Into<String>, message: impl Into<String>) {
        self.0.push(ConfigIssue {
            field: field.into(),
            message: message.into(),
        });
    }

    fn model(&mut self, e: ModelError) {
        match e {
            ModelError::OutOfRange {
                field,
                value,
                range,
            } => self.push(format!("model.{field}"), format!("{value} is outside {range}")),
            ModelError::Invalid { field, message } => self.push(format!("model.{field}"), message),
            ModelError::StrategyMismatch { strategy, family } => self.push(
                "model.variogram.strategy",
                format!("{strategy} is not available for {family}"),
            ),
            ModelError::DimensionMismatch { expected, got } => {
                self.push("model", format!("expected dimension {expected}, got {got}"))
            }
        }
    }
}

fn join(prefix: &str, key: &str) -> String {
    if prefix.is_empty() {
        key.to_string()
    } else {
        format!("{prefix}.{key}")
    }
}

fn check_keys(t: &Table, prefix: &str, allowed: &[&str], issues: &mut Issues) {
    let allowed: BTreeSet<&str> = allowed.iter().copied().collect();
    for k in t.keys() {
        if !allowed.contains(k.as_str()) {
            issues.push(join(prefix, k), "unknown key");
        }
    }
}

fn as_f64(v: &Value) -> Option<f64> {
    match v {
        Value::Float(x) => Some(*x),
        Value::Integer(i) => Some(*i as f64),
        _ => None,
    }
}

fn float(t: &Table, prefix: &str, key: &str, issues: &mut Issues) -> Option<f64> {
    let v = t.get(key)?;
    let x = as_f64(v);
    if x.is_none() {
        issues.push(join(prefix, key), "expected a number");
    }
    x
}

fn required_float(t: &Table, prefix: &str, key: &str, issues: &mut Issues) -> Option<f64> {
    if !t.contains_key(key) {
        issues.push(join(prefix, key), "missing");
        return None;
    }
    float(t, prefix, key, issues)
}

fn uint(t: &Table, prefix: &str, key: &str, issues: &mut Issues) -> Option<u64> {
    match t.get(key)? {
        Value::Integer(i) if *i >= 0 => Some(*i as u64),
        _ => {
            issues.push(join(prefix, key), "expected a nonnegative integer");
            None
        }
    }
}

fn string<'a>(t: &'a Table, prefix: &str, key: &str, issues: &mut Issues) -> Option<&'a str> {
    match t.get(key)? {
        Value::String(s) => Some(s),
        _ => {
            issues.push(join(prefix, key), "expected a string");
            None
        }
    }
}

fn floats(v: &Value) -> Option<Vec<f64>> {
    match v {
        Value::Array(a) => a.iter().map(as_f64).collect(),
        _ => None,
    }
}

fn float_list(t: &Table, prefix: &str, key: &str, issues: &mut Issues) -> Option<Vec<f64>> {
    let v = t.get(key)?;
    let x = floats(v);
    if x.is_none() {
        issues.push(join(prefix, key), "expected an array of numbers");
    }
    x
}

fn float_rows(t: &Table, prefix: &str, key: &str, issues: &mut Issues) -> Option<Vec<Vec<f64>>> {
    let v = t.get(key)?;
    let rows = match v {
        Value::Array(a) => a.iter().map(floats).collect::<Option<Vec<_>>>(),
        _ => None,
    };
    if rows.is_none() {
        issues.push(join(prefix, key), "expected an array of number arrays");
    }
    rows
}

fn table<'a>(t: &'a Table, prefix: &str, key: &str, issues: &mut Issues) -> Option<&'a Table> {
    match t.get(key)? {
        Value::Table(s) => Some(s),
        _ => {
            issues.push(join(prefix, key), "expected a table");
            None
        }
    }
}

fn parse_mixture(t: &Table, issues: &mut Issues) -> Option<MixtureMeasure> {
    let pre = "model.mixture";
    check_keys(t, pre, &["kind", "r", "c", "atoms", "label"], issues);
    let kind = match string(t, pre, "kind", issues) {
        Some("dirac") => required_float(t, pre, "r", issues).map(|r| MixtureKind::DiracAt { r }),
        Some("sqrt_gamma_half") => {
            required_float(t, pre, "c", issues).map(|c| MixtureKind::SqrtGammaHalf { c })
        }
        Some("tabulated") => {
            let atoms = float_rows(t, pre, "atoms", issues);
            match atoms {
                Some(rows) if rows.iter().all(|r| r.len() == 2) => Some(MixtureKind::Tabulated {
                    atoms: rows.iter().map(|r| (r[0], r[1])).collect(),
                }),
                Some(_) => {
                    issues.push(join(pre, "atoms"), "each atom is a [r, weight] pair");
                    None
                }
                None => {
                    if !t.contains_key("atoms") {
                        issues.push(join(pre, "atoms"), "missing");
                    }
                    None
                }
            }
        }
        Some(other) => {
            issues.push(
                join(pre, "kind"),
                format!("unknown mixture '{other}' (dirac, sqrt_gamma_half, tabulated)"),
            );
            None
        }
        None => {
            if !t.contains_key("kind") {
                issues.push(join(pre, "kind"), "missing");
            }
            None
        }
    }?;
    match MixtureMeasure::new(kind) {
        Ok(m) => Some(match string(t, pre, "label", issues) {
            Some(l) => m.with_label(l),
            None => m,
        }),
        Err(e) => {
            issues.model(e);
            None
        }
    }
}

fn parse_variogram(t: &Table, issues: &mut Issues) -> Option<VariogramSpec> {
    let pre = "model.variogram";
    check_keys(
        t,
        pre,
        &["family", "b", "alpha", "a", "beta", "id", "scale", "weight", "strategy"],
        issues,
    );
    let req = |key: &str, issues: &mut Issues| required_float(t, pre, key, issues);
    let family = match string(t, pre, "family", issues) {
        Some("linear") => req("b", issues).map(|b| VariogramFamily::Linear { b }),
        Some("fractional_power") => {
            req("alpha", issues).map(|alpha| VariogramFamily::FractionalPower { alpha })
        }
        Some("logarithmic") => req("a", issues).map(|a| VariogramFamily::Logarithmic { a }),
        Some("cauchy_class") => {
            let (a, alpha, beta) = (req("a", issues), req("alpha", issues), req("beta", issues));
            Some(VariogramFamily::CauchyClass {
                a: a?,
                alpha: alpha?,
                beta: beta?,
            })
        }
        Some("table") => {
            let id = match string(t, pre, "id", issues) {
                Some(name) => {
                    let id = TableId::from_name(name);
                    if id.is_none() {
                        let names: Vec<&str> = TableId::ALL.iter().map(|i| i.name()).collect();
                        issues.push(
                            join(pre, "id"),
                            format!("unknown table entry '{name}' ({})", names.join(", ")),
                        );
                    }
                    id
                }
                None => {
                    if !t.contains_key("id") {
                        issues.push(join(pre, "id"), "missing");
                    }
                    None
                }
            };
            let alpha = float(t, pre, "alpha", issues);
            let scale = float(t, pre, "scale", issues).unwrap_or(1.0);
            let weight = float(t, pre, "weight", issues).unwrap_or(1.0);
            id.map(|id| VariogramFamily::TableEntry {
                id,
                alpha,
                scale,
                weight,
            })
        }
        Some(other) => {
            issues.push(
                join(pre, "family"),
                format!(
                    "unknown family '{other}' (linear, fractional_power, logarithmic, cauchy_class, table)"
                ),
            );
            None
        }
        None => {
            if !t.contains_key("family") {
                issues.push(join(pre, "family"), "missing");
            }
            None
        }
    }?;
    let spec = match VariogramSpec::new(family) {
        Ok(s) => s,
        Err(e) => {
            issues.model(e);
            return None;
        }
    };
    match string(t, pre, "strategy", issues) {
        None => Some(spec),
        Some(name) => {
            let Some(strategy) = SamplerStrategy::from_name(name) else {
                issues.push(join(pre, "strategy"), format!("unknown strategy '{name}'"));
                return None;
            };
            match spec.with_strategy(strategy) {
                Ok(s) => Some(s),
                Err(e) => {
                    issues.model(e);
                    None
                }
            }
        }
    }
}

fn parse_points(root: &Table, k: Option<usize>, issues: &mut Issues) -> Option<SpaceTimePointSet> {
    let grid = table(root, "", "grid", issues);
    let points = table(root, "", "points", issues);
    match (grid, points) {
        (Some(_), Some(_)) => {
            issues.push("grid", "give either [grid] or [points], not both");
            None
        }
        (None, None) => {
            issues.push("grid", "missing (or give [points])");
            None
        }
        (Some(g), None) => {
            check_keys(g, "grid", &["origin", "mesh", "counts"], issues);
            let origin = float_list(g, "grid", "origin", issues);
            let mesh = float_list(g, "grid", "mesh", issues);
            let counts = match g.get("counts") {
                Some(Value::Array(a)) => a
                    .iter()
                    .map(|v| match v {
                        Value::Integer(i) if *i > 0 => Some(*i as usize),
                        _ => None,
                    })
                    .collect::<Option<Vec<_>>>(),
                _ => None,
            };
            if counts.is_none() {
                issues.push("grid.counts", "expected an array of positive integers");
            }
            let (origin, mesh, counts) = (origin?, mesh?, counts?);
            if let Some(k) = k {
                if origin.len() != k + 1 {
                    issues.push("grid", format!("needs k + 1 = {} axes, got {}", k + 1, origin.len()));
                    return None;
                }
            }
            match GridSpec::new(origin, mesh, counts) {
                Ok(g) => Some(SpaceTimePointSet::from_grid(g)),
                Err(e) => {
                    issues.model(e);
                    None
                }
            }
        }
        (None, Some(p)) => {
            check_keys(p, "points", &["spatial", "times"], issues);
            let spatial = float_rows(p, "points", "spatial", issues)?;
            let times = float_list(p, "points", "times", issues)?;
            let k = k?;
            if spatial.iter().any(|r| r.len() != k) {
                issues.push("points.spatial", format!("every point needs {k} coordinates"));
                return None;
            }
            match SpaceTimePointSet::from_points(k, spatial.concat(), times) {
                Ok(s) => Some(s),
                Err(e) => {
                    issues.model(e);
                    None
                }
            }
        }
    }
}

/// Matches simulated instants against the point times: each point time
/// must equal an instant up to `1e-9` relative, and the instant is then
/// replaced by the point time so that evaluation can match exactly.
fn align_instants(instants: &[f64], points: &SpaceTimePointSet, issues: &mut Issues) -> Option<Vec<f64>> {
    let mut out = instants.to_vec();
    for t in points.distinct_times() {
        let tol = 1e-9 * t.abs().max(1.0);
        match out.iter().position(|s| (s - t).abs() <= tol) {
            Some(i) => out[i] = t,
            None => {
                issues.push("instants", format!("time {t} of the point set is not listed"));
                return None;
            }
        }
    }
    Some(out)
}

/// Parses and validates a TOML run configuration, reporting every invalid
/// field at once.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let root: Table = toml::from_str(text).map_err(|e| ConfigError {
        issues: vec![ConfigIssue {
            field: "<syntax>".into(),
            message: e.message().to_string(),
        }],
    })?;
    let mut issues = Issues(vec![]);
    let iss = &mut issues;
    check_keys(
        &root,
        "",
        &[
            "method", "p", "seed", "eps", "realizations", "instants", "format", "out", "model",
            "grid", "points", "validate",
        ],
        iss,
    );
    let method = match string(&root, "", "method", iss).unwrap_or("spectral") {
        "spectral" => Some(Method::Spectral),
        "substitution" => Some(Method::Substitution),
        other => {
            iss.push("method", format!("unknown method '{other}' (spectral, substitution)"));
            None
        }
    };
    let p = uint(&root, "", "p", iss).unwrap_or(5000);
    if p == 0 {
        iss.push("p", "must be at least 1");
    }
    let seed = uint(&root, "", "seed", iss).unwrap_or(0);
    let eps = float(&root, "", "eps", iss).unwrap_or(DEFAULT_EPS);
    if !(eps > 0.0 && eps < 1.0) {
        iss.push("eps", format!("{eps} is outside (0, 1)"));
    }
    let realizations = uint(&root, "", "realizations", iss).unwrap_or(1);
    if realizations == 0 || realizations > u32::MAX as u64 {
        iss.push("realizations", "must be between 1 and 2³²-1");
    }
    let f = string(&root, "", "format", iss).unwrap_or("raw");
    let format = OutputFormat::parse(f).or_else(|| {
        iss.push("format", format!("unknown format '{f}' (csv, raw)"));
        None
    });
    let out = PathBuf::from(string(&root, "", "out", iss).unwrap_or("out"));

    let (mut k, mut mu, mut gamma) = (None, None, None);
    match table(&root, "", "model", iss) {
        None => {
            if !root.contains_key("model") {
                iss.push("model", "missing");
            }
        }
        Some(m) => {
            check_keys(m, "model", &["k", "mixture", "variogram"], iss);
            k = match uint(m, "model", "k", iss) {
                Some(0) => {
                    iss.push("model.k", "must be at least 1");
                    None
                }
                Some(k) => Some(k as usize),
                None => {
                    if !m.contains_key("k") {
                        iss.push("model.k", "missing");
                    }
                    None
                }
            };
            match table(m, "model", "mixture", iss) {
                Some(t) => mu = parse_mixture(t, iss),
                None if !m.contains_key("mixture") => iss.push("model.mixture", "missing"),
                None => {}
            }
            match table(m, "model", "variogram", iss) {
                Some(t) => gamma = parse_variogram(t, iss),
                None if !m.contains_key("variogram") => iss.push("model.variogram", "missing"),
                None => {}
            }
        }
    }
    if let (Some(mu), Some(Method::Spectral)) = (&mu, method) {
        if mu.has_atom_at_zero() {
            iss.push(
                "model.mixture",
                "has an atom at zero, which the spectral method cannot sample; use method = \"substitution\"",
            );
        }
    }
    let points = parse_points(&root, k, iss);
    let instants = match (method, float_list(&root, "", "instants", iss)) {
        (Some(Method::Substitution), None) => {
            if !root.contains_key("instants") {
                iss.push("instants", "required for method = \"substitution\"");
            }
            None
        }
        (_, Some(inst)) => {
            let mut sorted = inst.clone();
            sorted.sort_by(f64::total_cmp);
            if inst.is_empty() || sorted.windows(2).any(|w| w[0] == w[1]) {
                iss.push("instants", "must be a nonempty list of distinct times");
                None
            } else {
                match &points {
                    Some(pts) => align_instants(&inst, pts, iss),
                    None => Some(inst),
                }
            }
        }
        (_, None) => None,
    };
    let validate = parse_validate(&root, k.unwrap_or(1), iss);

    if !issues.0.is_empty() {
        return Err(ConfigError { issues: issues.0 });
    }
    let model = match GneitingModel::new(k.unwrap(), mu.unwrap(), gamma.unwrap()) {
        Ok(m) => m,
        Err(e) => {
            let mut issues = Issues(vec![]);
            issues.model(e);
            return Err(ConfigError { issues: issues.0 });
        }
    };
    Ok(RunConfig {
        model,
        method: method.unwrap(),
        p: p as usize,
        points: points.unwrap(),
        instants,
        seed,
        eps,
        realizations: realizations as u32,
        out,
        format: format.unwrap(),
        validate: validate.unwrap(),
    })
}

fn parse_validate(root: &Table, k: usize, iss: &mut Issues) -> Option<ValidateSpec> {
    let mut spec = ValidateSpec::defaults(k);
    let Some(v) = table(root, "", "validate", iss) else {
        return Some(spec);
    };
    let pre = "validate";
    check_keys(v, pre, &["u", "spatial_lags", "h", "temporal_lags", "band"], iss);
    if let Some(x) = float_list(v, pre, "u", iss) {
        spec.u_values = x;
    }
    if let Some(x) = float_list(v, pre, "spatial_lags", iss) {
        spec.spatial_lags = x;
    }
    if let Some(x) = float_rows(v, pre, "h", iss) {
        if x.iter().any(|h| h.len() != k) {
            iss.push("validate.h", format!("every lag needs {k} coordinates"));
        }
        spec.h_values = x;
    }
    if let Some(x) = float_list(v, pre, "temporal_lags", iss) {
        spec.temporal_lags = x;
    }
    if let Some(b) = float(v, pre, "band", iss) {
        if b <= 0.0 {
            iss.push("validate.band", "must be positive");
        }
        spec.band = b;
    }
    Some(spec)
}
