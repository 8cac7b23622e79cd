use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde_json::{json, Value};
use siec_entanglement::{FermiRule, ImKRule, DEFAULT_EPS_F};
use siec_experiments::{Baseline, CorrPath, CutRule, ModelSpec};
use siec_lattice::ModelName;
use toml::{Table, Value as Toml};

/// Output directory used when neither the config nor `--out` names one.
pub const DEFAULT_OUTPUT_DIR: &str = "siec-out";
/// Rung strength of the doubled system.
pub const DEFAULT_ETA: f64 = 1e-6;
/// Random operators per measurement-identity run.
pub const DEFAULT_OPERATORS: usize = 20;

const TOP_KEYS: &[&str] = &[
    "command",
    "model",
    "t_l",
    "t_r",
    "params",
    "delta",
    "length",
    "lengths",
    "l_range",
    "l_step",
    "cut",
    "path",
    "fermi_rule",
    "eps_f",
    "frozen_l0",
    "output_dir",
    "emit_spectra",
    "threads",
    "sweep",
    "baselines",
    "measurement",
];
const SWEEP_KEYS: &[&str] = &["ratios", "deltas"];
const GRID_KEYS: &[&str] = &["start", "stop", "count", "spacing"];
const BASELINE_KEYS: &[&str] = &["models"];
const MEASUREMENT_KEYS: &[&str] = &["base", "eta", "operators", "seed"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Command {
    Gbz,
    Entropy,
    DipScan,
    Sweep,
    Baselines,
    VerifyMeasurement,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::Gbz,
        Command::Entropy,
        Command::DipScan,
        Command::Sweep,
        Command::Baselines,
        Command::VerifyMeasurement,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Command::Gbz => "gbz",
            Command::Entropy => "entropy",
            Command::DipScan => "dip-scan",
            Command::Sweep => "sweep",
            Command::Baselines => "baselines",
            Command::VerifyMeasurement => "verify-measurement",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Command::ALL.into_iter().find(|c| c.as_str() == s).ok_or_else(|| format!("unknown command {s:?}"))
    }
}

/// Base Hamiltonian of the measurement-identity check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeasurementBase {
    /// Coupled ladder at the configured δ.
    Coupled,
    /// Single open chain.
    Chain,
}

impl MeasurementBase {
    pub fn as_str(self) -> &'static str {
        match self {
            MeasurementBase::Coupled => "coupled",
            MeasurementBase::Chain => "chain",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementSettings {
    pub base: MeasurementBase,
    pub eta: f64,
    pub operators: usize,
    pub seed: u64,
}

impl Default for MeasurementSettings {
    fn default() -> Self {
        Self { base: MeasurementBase::Coupled, eta: DEFAULT_ETA, operators: DEFAULT_OPERATORS, seed: 0 }
    }
}

/// Validated run configuration with every default filled in.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub model: ModelName,
    pub params: BTreeMap<String, f64>,
    pub delta: Option<f64>,
    pub lengths: Vec<usize>,
    pub cut: CutRule,
    pub path: CorrPath,
    pub fermi_rule: FermiRule,
    pub eps_f: f64,
    pub im_k: ImKRule,
    pub output_dir: PathBuf,
    pub emit_spectra: bool,
    pub threads: Option<usize>,
    pub ratios: Vec<f64>,
    pub deltas: Vec<f64>,
    pub baselines: Vec<Baseline>,
    pub measurement: MeasurementSettings,
}

impl RunConfig {
    pub fn model_spec(&self) -> ModelSpec {
        ModelSpec::new(self.model, self.params.clone())
    }

    /// `(t_L, t_R)` when the model is the plain two-parameter chain.
    pub fn hoppings(&self) -> Option<(f64, f64)> {
        (self.model == ModelName::NhSsh).then(|| (self.params["t_l"], self.params["t_r"]))
    }

    /// Every resolved setting, for `meta.json`.
    pub fn to_json(&self) -> Value {
        let (cut, cut_interval) = match self.cut {
            CutRule::Interval { lo, hi } => ("interval", Some([lo, hi])),
            other => (cut_name(other), None),
        };
        json!({
            "command": self.command.as_str(),
            "model": self.model.as_str(),
            "params": self.params,
            "delta": self.delta,
            "lengths": self.lengths,
            "cut": cut,
            "cut_interval": cut_interval,
            "path": self.path.as_str(),
            "fermi_rule": self.fermi_rule.as_str(),
            "eps_f": self.eps_f,
            "im_k": match self.im_k {
                ImKRule::Scaling => json!("scaling"),
                ImKRule::Frozen(l0) => json!({ "frozen": l0 }),
            },
            "output_dir": self.output_dir.to_string_lossy(),
            "emit_spectra": self.emit_spectra,
            "threads": self.threads,
            "ratios": self.ratios,
            "deltas": self.deltas,
            "baselines": self.baselines.iter().map(|b| b.as_str()).collect::<Vec<_>>(),
            "measurement": {
                "base": self.measurement.base.as_str(),
                "eta": self.measurement.eta,
                "operators": self.measurement.operators,
                "seed": self.measurement.seed,
            },
        })
    }
}

fn cut_name(cut: CutRule) -> &'static str {
    match cut {
        CutRule::None => "none",
        CutRule::Half => "half",
        CutRule::SingleCell => "single_cell",
        CutRule::Centered => "centered",
        CutRule::Interval { .. } => "interval",
    }
}

/// Every problem found in a config, in document order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError {
    pub errors: Vec<String>,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid configuration:")?;
        for e in &self.errors {
            write!(f, "\n  - {e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigError {}

struct Reader {
    errors: Vec<String>,
}

impl Reader {
    fn push(&mut self, msg: impl Into<String>) {
        self.errors.push(msg.into());
    }

    fn check_keys(&mut self, table: &Table, allowed: &[&str], scope: &str) {
        for key in table.keys() {
            if !allowed.contains(&key.as_str()) {
                self.push(format!("unknown key {scope}{key:?}"));
            }
        }
    }

    fn float(&mut self, table: &Table, key: &str) -> Option<f64> {
        match table.get(key)? {
            Toml::Float(x) => Some(*x),
            Toml::Integer(i) => Some(*i as f64),
            other => {
                self.push(format!("{key} must be a number, got {}", other.type_str()));
                None
            }
        }
    }

    fn uint(&mut self, table: &Table, key: &str) -> Option<usize> {
        match table.get(key)? {
            Toml::Integer(i) if *i >= 0 => Some(*i as usize),
            Toml::Integer(i) => {
                self.push(format!("{key} must be ≥ 0, got {i}"));
                None
            }
            other => {
                self.push(format!("{key} must be an integer, got {}", other.type_str()));
                None
            }
        }
    }

    fn string<'a>(&mut self, table: &'a Table, key: &str) -> Option<&'a str> {
        match table.get(key)? {
            Toml::String(s) => Some(s),
            other => {
                self.push(format!("{key} must be a string, got {}", other.type_str()));
                None
            }
        }
    }

    fn boolean(&mut self, table: &Table, key: &str) -> Option<bool> {
        match table.get(key)? {
            Toml::Boolean(b) => Some(*b),
            other => {
                self.push(format!("{key} must be a boolean, got {}", other.type_str()));
                None
            }
        }
    }

    fn sub_table<'a>(&mut self, table: &'a Table, key: &str) -> Option<&'a Table> {
        match table.get(key)? {
            Toml::Table(t) => Some(t),
            other => {
                self.push(format!("{key} must be a table, got {}", other.type_str()));
                None
            }
        }
    }

    fn parsed<T: FromStr>(&mut self, table: &Table, key: &str) -> Option<T>
    where
        T::Err: fmt::Display,
    {
        let s = self.string(table, key)?;
        match s.parse() {
            Ok(v) => Some(v),
            Err(e) => {
                self.push(format!("{key}: {e}"));
                None
            }
        }
    }

    fn uint_array(&mut self, table: &Table, key: &str) -> Option<Vec<usize>> {
        let Toml::Array(items) = table.get(key)? else {
            self.push(format!("{key} must be an array of integers"));
            return None;
        };
        let mut out = Vec::with_capacity(items.len());
        for item in items {
            match item {
                Toml::Integer(i) if *i >= 0 => out.push(*i as usize),
                _ => {
                    self.push(format!("{key} must contain non-negative integers, got {item}"));
                    return None;
                }
            }
        }
        Some(out)
    }

    /// An array of numbers or a `{ start, stop, count, spacing }` grid.
    fn grid(&mut self, table: &Table, key: &str) -> Option<Vec<f64>> {
        match table.get(key)? {
            Toml::Array(items) => {
                let mut out = Vec::with_capacity(items.len());
                for item in items {
                    match item {
                        Toml::Float(x) => out.push(*x),
                        Toml::Integer(i) => out.push(*i as f64),
                        _ => {
                            self.push(format!("{key} must contain numbers, got {item}"));
                            return None;
                        }
                    }
                }
                Some(out)
            }
            Toml::Table(t) => {
                self.check_keys(t, GRID_KEYS, &format!("{key}."));
                let (start, stop, count) = (self.float(t, "start"), self.float(t, "stop"), self.uint(t, "count"));
                for (name, v) in [("start", start.is_some()), ("stop", stop.is_some()), ("count", count.is_some())] {
                    if !v && !t.contains_key(name) {
                        self.push(format!("{key}.{name} is required"));
                    }
                }
                let spacing = self.string(t, "spacing").unwrap_or("linear");
                let (start, stop, count) = (start?, stop?, count?);
                if count == 0 {
                    self.push(format!("{key}.count must be ≥ 1"));
                    return None;
                }
                let at = |i: usize| if count == 1 { 0.0 } else { i as f64 / (count - 1) as f64 };
                match spacing {
                    "linear" => Some((0..count).map(|i| start + (stop - start) * at(i)).collect()),
                    "log" if start > 0.0 && stop > 0.0 => {
                        Some((0..count).map(|i| (start.ln() + (stop.ln() - start.ln()) * at(i)).exp()).collect())
                    }
                    "log" => {
                        self.push(format!("{key}: log spacing needs positive start and stop"));
                        None
                    }
                    other => {
                        self.push(format!("{key}.spacing must be \"linear\" or \"log\", got {other:?}"));
                        None
                    }
                }
            }
            other => {
                self.push(format!("{key} must be an array or a grid table, got {}", other.type_str()));
                None
            }
        }
    }
}

/// Parses and validates a TOML run configuration for `command`.
pub fn parse_config(text: &str, command: Command) -> Result<RunConfig, ConfigError> {
    let table: Table = text.parse().map_err(|e: toml::de::Error| ConfigError { errors: vec![e.to_string()] })?;
    let mut r = Reader { errors: Vec::new() };
    r.check_keys(&table, TOP_KEYS, "");

    if let Some(c) = r.parsed::<Command>(&table, "command") {
        if c != command {
            r.push(format!("config is for {c} but the command is {command}"));
        }
    }

    let model =
        if table.contains_key("model") { r.parsed::<ModelName>(&table, "model") } else { Some(ModelName::NhSsh) };
    let mut params = BTreeMap::new();
    for key in ["t_l", "t_r"] {
        if let Some(v) = r.float(&table, key) {
            params.insert(key.to_string(), v);
        }
    }
    if let Some(extra) = r.sub_table(&table, "params") {
        for key in extra.keys() {
            match r.float(extra, key) {
                Some(v) if params.contains_key(key) => {
                    r.push(format!("params.{key} repeats the top-level {key}"));
                    params.insert(key.clone(), v);
                }
                Some(v) => {
                    params.insert(key.clone(), v);
                }
                None => {}
            }
        }
    }
    let model_needed = !matches!(command, Command::Sweep | Command::Baselines);
    if let Some(model) = model {
        if model_needed {
            let given = |p: &str| {
                table.contains_key(p) || table.get("params").and_then(Toml::as_table).is_some_and(|t| t.contains_key(p))
            };
            for p in model.parameters() {
                if !given(p) {
                    r.push(format!("model {model} needs parameter {p}"));
                }
            }
        }
        for p in params.keys() {
            if !model.parameters().contains(&p.as_str()) {
                r.push(format!("model {model} has no parameter {p}"));
            }
        }
        if command == Command::Gbz && model != ModelName::NhSsh {
            r.push(format!("gbz needs model nh_ssh, got {model}"));
        }
        if command == Command::Sweep && model != ModelName::NhSsh {
            r.push(format!("sweep varies nh_ssh hoppings, got model {model}"));
        }
    }
    for (k, v) in &params {
        if !v.is_finite() {
            r.push(format!("{k} must be finite, got {v}"));
        }
    }

    let delta = r.float(&table, "delta");
    if let Some(d) = delta {
        if !(d.is_finite() && d >= 0.0) {
            r.push(format!("delta must be ≥ 0, got {d}"));
        } else if command == Command::Gbz && d == 0.0 {
            r.push("delta must be > 0 for gbz".to_string());
        }
    } else if matches!(command, Command::Gbz | Command::Entropy | Command::DipScan) {
        r.push("delta is required");
    }

    let lengths = read_lengths(&mut r, &table, command);

    let cut = match table.get("cut") {
        None => Some(CutRule::Half),
        Some(Toml::String(s)) => match s.as_str() {
            "half" => Some(CutRule::Half),
            "single_cell" => Some(CutRule::SingleCell),
            "centered" => Some(CutRule::Centered),
            "none" => Some(CutRule::None),
            other => {
                r.push(format!(
                    "cut must be \"half\", \"single_cell\", \"centered\", \"none\" or [lo, hi], got {other:?}"
                ));
                None
            }
        },
        Some(Toml::Array(_)) => match r.uint_array(&table, "cut").as_deref() {
            Some(&[lo, hi]) if lo >= 1 && lo <= hi => Some(CutRule::Interval { lo, hi }),
            Some(&[lo, hi]) if lo > hi => {
                r.push(format!("cut interval [{lo}, {hi}] is empty"));
                None
            }
            Some(&[_, _]) => {
                r.push("cut interval cells start at 1");
                None
            }
            Some(_) => {
                r.push("cut interval must be [lo, hi]");
                None
            }
            None => None,
        },
        Some(other) => {
            r.push(format!("cut must be a string or [lo, hi], got {}", other.type_str()));
            None
        }
    };
    if let (Some(cut @ CutRule::Interval { hi, .. }), Some(lengths)) = (cut, lengths.as_ref()) {
        if let Some(&l) = lengths.iter().find(|&&l| l < hi) {
            r.push(format!("cut {} exceeds L = {l}", cut.label()));
        }
    }

    let path = if table.contains_key("path") { r.parsed::<CorrPath>(&table, "path") } else { Some(CorrPath::Dense) };
    if path == Some(CorrPath::Effective) && model.is_some_and(|m| m != ModelName::NhSsh) {
        r.push("path \"effective\" needs model nh_ssh");
    }
    let fermi_rule = if table.contains_key("fermi_rule") {
        r.parsed::<FermiRule>(&table, "fermi_rule")
    } else {
        Some(FermiRule::Strict)
    };
    let eps_f = r.float(&table, "eps_f").unwrap_or(DEFAULT_EPS_F);
    if !(eps_f.is_finite() && eps_f >= 0.0) {
        r.push(format!("eps_f must be ≥ 0, got {eps_f}"));
    }
    let im_k = match r.uint(&table, "frozen_l0") {
        Some(l0) => ImKRule::Frozen(l0),
        None => ImKRule::Scaling,
    };
    let output_dir = r.string(&table, "output_dir").map_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR), PathBuf::from);
    let emit_spectra = r.boolean(&table, "emit_spectra").unwrap_or(false);
    let threads = r.uint(&table, "threads");
    if threads == Some(0) {
        r.push("threads must be ≥ 1");
    }

    let (mut ratios, mut deltas) = (Vec::new(), Vec::new());
    match r.sub_table(&table, "sweep") {
        Some(sweep) => {
            r.check_keys(sweep, SWEEP_KEYS, "sweep.");
            for (key, out) in [("ratios", &mut ratios), ("deltas", &mut deltas)] {
                match r.grid(sweep, key) {
                    Some(v) if v.is_empty() => r.push(format!("sweep.{key} is empty")),
                    Some(v) => *out = v,
                    None if !sweep.contains_key(key) => r.push(format!("sweep.{key} is required")),
                    None => {}
                }
            }
            if ratios.iter().any(|&x| !(x.is_finite() && x > 0.0)) {
                r.push("sweep.ratios must be positive");
            }
            if deltas.iter().any(|&x| !(x.is_finite() && x >= 0.0)) {
                r.push("sweep.deltas must be ≥ 0");
            }
        }
        None if command == Command::Sweep && !table.contains_key("sweep") => r.push("[sweep] is required"),
        None => {}
    }

    let mut baselines = Baseline::ALL.to_vec();
    if let Some(section) = r.sub_table(&table, "baselines") {
        r.check_keys(section, BASELINE_KEYS, "baselines.");
        match section.get("models") {
            Some(Toml::Array(items)) => {
                let mut chosen = Vec::new();
                for item in items {
                    match item.as_str().map(Baseline::from_str) {
                        Some(Ok(b)) => chosen.push(b),
                        Some(Err(e)) => r.push(format!("baselines.models: {e}")),
                        None => r.push(format!("baselines.models must contain strings, got {item}")),
                    }
                }
                if items.is_empty() {
                    r.push("baselines.models is empty");
                }
                baselines = chosen;
            }
            Some(other) => r.push(format!("baselines.models must be an array, got {}", other.type_str())),
            None => {}
        }
    }

    let mut measurement = MeasurementSettings::default();
    if let Some(section) = r.sub_table(&table, "measurement") {
        r.check_keys(section, MEASUREMENT_KEYS, "measurement.");
        if let Some(base) = r.string(section, "base") {
            match base {
                "coupled" => measurement.base = MeasurementBase::Coupled,
                "chain" => measurement.base = MeasurementBase::Chain,
                other => r.push(format!("measurement.base must be \"coupled\" or \"chain\", got {other:?}")),
            }
        }
        if let Some(eta) = r.float(section, "eta") {
            if !(eta.is_finite() && eta >= 0.0) {
                r.push(format!("measurement.eta must be ≥ 0, got {eta}"));
            }
            measurement.eta = eta;
        }
        if let Some(n) = r.uint(section, "operators") {
            if n == 0 {
                r.push("measurement.operators must be ≥ 1");
            }
            measurement.operators = n;
        }
        if let Some(seed) = r.uint(section, "seed") {
            measurement.seed = seed as u64;
        }
    }
    if command == Command::VerifyMeasurement {
        if measurement.base == MeasurementBase::Coupled && delta.is_none() && !table.contains_key("delta") {
            r.push("delta is required for the coupled measurement base");
        }
        if let Some(l) = lengths.as_ref().filter(|l| l.len() != 1) {
            r.push(format!("verify-measurement takes one length, got {}", l.len()));
        }
    }

    if !r.errors.is_empty() {
        return Err(ConfigError { errors: r.errors });
    }
    Ok(RunConfig {
        command,
        model: model.expect("validated"),
        params,
        delta,
        lengths: lengths.unwrap_or_default(),
        cut: cut.expect("validated"),
        path: path.expect("validated"),
        fermi_rule: fermi_rule.expect("validated"),
        eps_f,
        im_k,
        output_dir,
        emit_spectra,
        threads,
        ratios,
        deltas,
        baselines,
        measurement,
    })
}

fn read_lengths(r: &mut Reader, table: &Table, command: Command) -> Option<Vec<usize>> {
    let given: Vec<&str> = ["length", "lengths", "l_range"].into_iter().filter(|k| table.contains_key(*k)).collect();
    if given.len() > 1 {
        r.push(format!("give only one of length, lengths and l_range, got {}", given.join(", ")));
        return None;
    }
    if table.contains_key("l_step") && given != ["l_range"] {
        r.push("l_step needs l_range");
    }
    let lengths = match given.first().copied() {
        Some("length") => r.uint(table, "length").map(|l| vec![l]),
        Some("lengths") => r.uint_array(table, "lengths"),
        Some(_) => {
            let step = r.uint(table, "l_step").unwrap_or(1);
            if step == 0 {
                r.push("l_step must be ≥ 1");
                return None;
            }
            match r.uint_array(table, "l_range").as_deref() {
                Some(&[lo, hi]) => Some((lo..=hi).step_by(step).collect()),
                Some(_) => {
                    r.push("l_range must be [first, last]");
                    None
                }
                None => None,
            }
        }
        None => {
            if command != Command::Baselines {
                r.push("one of length, lengths or l_range is required");
            }
            return None;
        }
    }?;
    if lengths.is_empty() {
        r.push("L range is empty");
        return None;
    }
    if let Some(&l) = lengths.iter().find(|&&l| l == 0) {
        r.push(format!("lengths must be ≥ 1, got {l}"));
        return None;
    }
    Some(lengths)
}
