//! Flat `key = value` run configuration with `#` comments.
//!
//! A `preset = scenario-a|scenario-b` line seeds every key with the
//! reference setup; any other line overrides it regardless of order.

use std::collections::BTreeMap;
use std::path::PathBuf;

use crate::error::{ConfigError, ModelError, SolverError};
use crate::model::{Incidence, IncidenceFunctions, ModelParams};
use crate::solver::{FieldState, Grid1D, Scheme, SimulationSettings, StepParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IncidenceKind {
    Linear,
    Saturating,
}

impl IncidenceKind {
    fn build(self, beta: f64) -> Incidence {
        match self {
            IncidenceKind::Linear => Incidence::linear(beta),
            IncidenceKind::Saturating => Incidence::saturating(beta),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialCondition {
    /// S = 1e7, I = V = 100·eˣ.
    Exponential,
    /// S = 1e7, I = V = 100·e^(x/10).
    ExponentialTenth,
    Constant {
        s: f64,
        i: f64,
        v: f64,
    },
}

impl InitialCondition {
    pub fn sample(&self, grid: &Grid1D) -> FieldState {
        match *self {
            InitialCondition::Exponential => {
                FieldState::from_fn(grid, |_| 1e7, |x| 100.0 * x.exp(), |x| 100.0 * x.exp())
            }
            InitialCondition::ExponentialTenth => FieldState::from_fn(
                grid,
                |_| 1e7,
                |x| 100.0 * (x / 10.0).exp(),
                |x| 100.0 * (x / 10.0).exp(),
            ),
            InitialCondition::Constant { s, i, v } => FieldState::uniform(grid.n_nodes(), s, i, v),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensitivityOptions {
    pub samples: usize,
    pub sd_fraction: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams,
    pub beta1: f64,
    pub beta2: f64,
    pub incidence_virus: IncidenceKind,
    pub incidence_cell: IncidenceKind,
    pub grid: Grid1D,
    pub dt: f64,
    pub horizon: f64,
    pub snapshot_every: f64,
    pub scheme: Scheme,
    pub initial: InitialCondition,
    pub steady_tol: f64,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub sensitivity: SensitivityOptions,
}

impl RunConfig {
    pub fn incidence(&self) -> IncidenceFunctions {
        IncidenceFunctions::new(
            self.incidence_virus.build(self.beta1),
            self.incidence_cell.build(self.beta2),
        )
    }

    pub fn initial_state(&self) -> FieldState {
        self.initial.sample(&self.grid)
    }

    pub fn settings(&self) -> SimulationSettings {
        SimulationSettings {
            step: StepParams {
                dt: self.dt,
                scheme: self.scheme,
            },
            horizon: self.horizon,
            snapshot_every: self.snapshot_every,
            steady_tol: self.steady_tol,
        }
    }

    pub fn preset(name: &str) -> Option<RunConfig> {
        let text = preset_text(name)?;
        Some(parse_config(text).expect("built-in presets are valid"))
    }

    pub fn scenario_a() -> RunConfig {
        Self::preset("scenario-a").expect("preset exists")
    }

    pub fn scenario_b() -> RunConfig {
        Self::preset("scenario-b").expect("preset exists")
    }
}

const SCENARIO_A: &str = include_str!("../presets/scenario-a.conf");
const SCENARIO_B: &str = include_str!("../presets/scenario-b.conf");

fn preset_text(name: &str) -> Option<&'static str> {
    match name {
        "scenario-a" => Some(SCENARIO_A),
        "scenario-b" => Some(SCENARIO_B),
        _ => None,
    }
}

const KEYS: &[&str] = &[
    "preset",
    "Lambda",
    "d_S",
    "d_I",
    "d_V",
    "gamma",
    "alpha",
    "D1",
    "D2",
    "D3",
    "beta1",
    "beta2",
    "incidence",
    "incidence_virus",
    "incidence_cell",
    "a",
    "b",
    "M",
    "dt",
    "horizon",
    "snapshot_every",
    "scheme",
    "initial",
    "init_S",
    "init_I",
    "init_V",
    "steady_tol",
    "seed",
    "output_dir",
    "sensitivity.samples",
    "sensitivity.sd_fraction",
];

const REQUIRED: &[&str] = &[
    "Lambda", "d_S", "d_I", "d_V", "gamma", "alpha", "D1", "D2", "D3", "beta1", "beta2", "a", "b", "M", "dt", "horizon",
];

struct Entry {
    value: String,
    line: usize,
}

fn tokenize(text: &str) -> Result<BTreeMap<String, Entry>, ConfigError> {
    let mut entries = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Parse {
            line,
            message: format!("expected `key = value`, got `{content}`"),
        })?;
        let key = key.trim();
        let value = value.trim();
        if !KEYS.contains(&key) {
            return Err(ConfigError::Parse {
                line,
                message: format!("unknown key `{key}`"),
            });
        }
        if value.is_empty() {
            return Err(ConfigError::Parse {
                line,
                message: format!("empty value for `{key}`"),
            });
        }
        if entries.contains_key(key) {
            return Err(ConfigError::Parse {
                line,
                message: format!("duplicate key `{key}`"),
            });
        }
        entries.insert(
            key.to_string(),
            Entry {
                value: value.to_string(),
                line,
            },
        );
    }
    Ok(entries)
}

struct Values {
    entries: BTreeMap<String, Entry>,
}

impl Values {
    fn raw(&self, key: &str) -> Option<&Entry> {
        self.entries.get(key)
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError> {
        match self.raw(key) {
            None => Ok(None),
            Some(e) => e.value.parse::<T>().map(Some).map_err(|_| ConfigError::Parse {
                line: e.line,
                message: format!("cannot parse `{}` for `{key}`", e.value),
            }),
        }
    }

    fn required<T: std::str::FromStr>(&self, key: &str) -> Result<T, ConfigError> {
        self.parsed(key)?
            .ok_or_else(|| ConfigError::validation(key, "missing required key"))
    }

    fn f64_or(&self, key: &str, default: f64) -> Result<f64, ConfigError> {
        Ok(self.parsed(key)?.unwrap_or(default))
    }
}

fn incidence_kind(values: &Values, key: &str) -> Result<Option<IncidenceKind>, ConfigError> {
    match values.raw(key) {
        None => Ok(None),
        Some(e) => match e.value.as_str() {
            "linear" => Ok(Some(IncidenceKind::Linear)),
            "saturating" => Ok(Some(IncidenceKind::Saturating)),
            other => Err(ConfigError::validation(
                key,
                format!("expected `linear` or `saturating`, got `{other}`"),
            )),
        },
    }
}

fn model_error_key(err: ModelError) -> ConfigError {
    match err {
        ModelError::InvalidParameter { name, reason } => ConfigError::validation(name, reason),
        other => ConfigError::validation("params", other.to_string()),
    }
}

/// Replaces (or appends) each `key=value` override in a configuration text.
/// Keys are not checked here; `parse_config` reports unknown ones.
pub fn apply_overrides(text: &str, overrides: &[String]) -> Result<String, ConfigError> {
    let mut pairs = Vec::with_capacity(overrides.len());
    for o in overrides {
        let (k, v) = o
            .split_once('=')
            .ok_or_else(|| ConfigError::validation(o.trim(), "override must look like key=value"))?;
        pairs.push((k.trim(), v.trim()));
    }
    let mut out: String = text
        .lines()
        .filter(|raw| {
            let content = raw.split('#').next().unwrap_or("");
            match content.split_once('=') {
                Some((k, _)) => !pairs.iter().any(|(key, _)| *key == k.trim()),
                None => true,
            }
        })
        .flat_map(|l| [l, "\n"])
        .collect();
    for (k, v) in pairs {
        out.push_str(&format!("{k} = {v}\n"));
    }
    Ok(out)
}

/// Parses and validates a configuration text.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut entries = tokenize(text)?;
    if let Some(preset) = entries.remove("preset") {
        let base = preset_text(&preset.value)
            .ok_or_else(|| ConfigError::validation("preset", format!("unknown preset `{}`", preset.value)))?;
        for (key, entry) in tokenize(base)? {
            entries.entry(key).or_insert(Entry {
                value: entry.value,
                line: 0,
            });
        }
    }
    let values = Values { entries };
    let missing: Vec<&str> = REQUIRED.iter().copied().filter(|k| values.raw(k).is_none()).collect();
    if let Some(first) = missing.first() {
        return Err(ConfigError::validation(
            first,
            format!("missing required key(s): {}", missing.join(", ")),
        ));
    }

    let params = ModelParams {
        lambda: values.required("Lambda")?,
        d_s: values.required("d_S")?,
        d_i: values.required("d_I")?,
        d_v: values.required("d_V")?,
        gamma: values.required("gamma")?,
        alpha: values.required("alpha")?,
        d1: values.required("D1")?,
        d2: values.required("D2")?,
        d3: values.required("D3")?,
    };
    params.validate().map_err(model_error_key)?;

    let beta1: f64 = values.required("beta1")?;
    let beta2: f64 = values.required("beta2")?;
    for (key, beta) in [("beta1", beta1), ("beta2", beta2)] {
        if !(beta.is_finite() && beta >= 0.0) {
            return Err(ConfigError::validation(key, "must be finite and >= 0"));
        }
    }
    let both = incidence_kind(&values, "incidence")?;
    let incidence_virus = incidence_kind(&values, "incidence_virus")?
        .or(both)
        .unwrap_or(IncidenceKind::Linear);
    let incidence_cell = incidence_kind(&values, "incidence_cell")?
        .or(both)
        .unwrap_or(IncidenceKind::Linear);

    let a: f64 = values.required("a")?;
    let b: f64 = values.required("b")?;
    let m: usize = values.required("M")?;
    let grid = Grid1D::new(a, b, m).map_err(|e| match e {
        SolverError::InvalidGrid(msg) if m < 2 => ConfigError::validation("M", msg),
        other => ConfigError::validation("b", other.to_string()),
    })?;

    let dt: f64 = values.required("dt")?;
    if !(dt.is_finite() && dt > 0.0) {
        return Err(ConfigError::validation(
            "dt",
            format!("must be finite and > 0, got {dt}"),
        ));
    }
    let horizon: f64 = values.required("horizon")?;
    if !(horizon.is_finite() && horizon >= dt) {
        return Err(ConfigError::validation("horizon", "must be finite and >= dt"));
    }
    let snapshot_every = values.f64_or("snapshot_every", horizon / 10.0)?;
    if !(snapshot_every.is_finite() && snapshot_every > 0.0) {
        return Err(ConfigError::validation("snapshot_every", "must be > 0"));
    }
    let scheme = match values.raw("scheme").map(|e| e.value.as_str()) {
        None | Some("nsfd") => Scheme::Nsfd,
        Some("sfd") | Some("explicit-sfd") => Scheme::ExplicitSfd,
        Some(other) => {
            return Err(ConfigError::validation(
                "scheme",
                format!("expected `nsfd` or `sfd`, got `{other}`"),
            ))
        }
    };

    let initial = match values.raw("initial").map(|e| e.value.as_str()) {
        None | Some("exponential") => InitialCondition::Exponential,
        Some("exponential-tenth") => InitialCondition::ExponentialTenth,
        Some("constant") => {
            let s: f64 = values.required("init_S")?;
            let i = values.required("init_I")?;
            let v = values.required("init_V")?;
            for (key, x) in [("init_S", s), ("init_I", i), ("init_V", v)] {
                if !(x.is_finite() && x >= 0.0) {
                    return Err(ConfigError::validation(key, "must be finite and >= 0"));
                }
            }
            InitialCondition::Constant { s, i, v }
        }
        Some(other) => {
            return Err(ConfigError::validation(
                "initial",
                format!("expected `exponential`, `exponential-tenth` or `constant`, got `{other}`"),
            ))
        }
    };

    let steady_tol = values.f64_or("steady_tol", 1e-10)?;
    if !(steady_tol >= 0.0) {
        return Err(ConfigError::validation("steady_tol", "must be >= 0"));
    }
    let seed = values.parsed::<u64>("seed")?.unwrap_or(42);
    let output_dir = values
        .raw("output_dir")
        .map(|e| PathBuf::from(&e.value))
        .unwrap_or_else(|| PathBuf::from("out"));

    let samples = values.parsed::<usize>("sensitivity.samples")?.unwrap_or(1000);
    if samples < 10 {
        return Err(ConfigError::validation(
            "sensitivity.samples",
            format!("n_samples must be >= 10, got {samples}"),
        ));
    }
    let sd_fraction = values.f64_or("sensitivity.sd_fraction", 0.1)?;
    if !(sd_fraction.is_finite() && sd_fraction >= 0.0) {
        return Err(ConfigError::validation("sensitivity.sd_fraction", "must be >= 0"));
    }

    Ok(RunConfig {
        params,
        beta1,
        beta2,
        incidence_virus,
        incidence_cell,
        grid,
        dt,
        horizon,
        snapshot_every,
        scheme,
        initial,
        steady_tol,
        seed,
        output_dir,
        sensitivity: SensitivityOptions { samples, sd_fraction },
    })
}
