//! Layered `key = value` sweep configuration.
//!
//! Values come from up to four layers, later ones winning: the thread-count
//! environment variable, a named preset, a config file, then command-line
//! flags. Every value remembers where it came from so diagnostics can point
//! at a file line or a flag.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::code::{Scenario, Serialization};
use crate::gates::{FloatingGateParams, GateSpec, LdivParams, Variant};
use crate::sim::{Backend, DEFAULT_MAX_WIDTH};

use super::presets;

pub const THREADS_ENV: &str = "S17BENCH_THREADS";

/// Default trajectory budget per encoded state.
pub const DEFAULT_TRAJECTORIES: u64 = 200_000;

/// Fixed phase shift used by every exchange-gate sweep.
pub const DEFAULT_DELTA: f64 = -0.0145;

pub const FLOATING_R_DOMAIN: (f64, f64) = (30.0, 35.0);
pub const FLOATING_GAMMA_DOMAIN: (f64, f64) = (0.0, 1.0);
pub const LDIV_T_DOMAIN: (f64, f64) = (1.0, 1.1);
pub const LDIV_GAMMA_DOMAIN: (f64, f64) = (0.007, 0.027);

const KEYS: &[&str] = &[
    "preset",
    "gate",
    "scenario",
    "grid",
    "param1_range",
    "param2_range",
    "delta",
    "p_init",
    "backend",
    "n_samples",
    "seed",
    "serialization",
    "max_width",
    "output",
    "json",
    "threads",
    "allow_out_of_domain",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    Default,
    Env(&'static str),
    Preset(String),
    File { path: PathBuf, line: usize },
    Flag(String),
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Default => write!(f, "defaults"),
            Origin::Env(v) => write!(f, "environment variable {v}"),
            Origin::Preset(p) => write!(f, "preset {p}"),
            Origin::File { path, line } => write!(f, "{}:{line}", path.display()),
            Origin::Flag(name) => write!(f, "flag --{name}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{origin}: field `{field}`: {message}")]
pub struct ConfigError {
    pub origin: Origin,
    pub field: String,
    pub message: String,
}

impl ConfigError {
    fn new(origin: &Origin, field: &str, message: impl Into<String>) -> Self {
        Self {
            origin: origin.clone(),
            field: field.to_string(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    Ideal,
    V1,
    V2,
    Ldiv,
    LdivNoK2,
}

impl GateKind {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "ideal" => GateKind::Ideal,
            "v1" => GateKind::V1,
            "v2" => GateKind::V2,
            "ldiv" => GateKind::Ldiv,
            "ldiv_no_k2" => GateKind::LdivNoK2,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::Ideal => "ideal",
            GateKind::V1 => "v1",
            GateKind::V2 => "v2",
            GateKind::Ldiv => "ldiv",
            GateKind::LdivNoK2 => "ldiv_no_k2",
        }
    }

    fn family(self) -> Family {
        match self {
            GateKind::Ideal => Family::Ideal,
            GateKind::V1 | GateKind::V2 => Family::Floating,
            GateKind::Ldiv | GateKind::LdivNoK2 => Family::Exchange,
        }
    }

    /// The sweep domain of `(param1, param2)`.
    pub fn domain(self) -> Option<((f64, f64), (f64, f64))> {
        match self.family() {
            Family::Ideal => None,
            Family::Floating => Some((FLOATING_R_DOMAIN, FLOATING_GAMMA_DOMAIN)),
            Family::Exchange => Some((LDIV_T_DOMAIN, LDIV_GAMMA_DOMAIN)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    Ideal,
    Floating,
    Exchange,
}

/// Raw, origin-tagged key/value pairs before interpretation.
#[derive(Debug, Clone, Default)]
pub struct Layers {
    values: BTreeMap<String, (String, Origin)>,
}

fn normalize_key(key: &str) -> String {
    key.trim().replace('-', "_")
}

impl Layers {
    pub fn new() -> Self {
        Self::default()
    }

    /// Set one key, overriding anything set earlier.
    pub fn set(&mut self, key: &str, value: &str, origin: Origin) -> Result<(), ConfigError> {
        let key = normalize_key(key);
        if !KEYS.contains(&key.as_str()) {
            return Err(ConfigError::new(&origin, &key, "unknown key"));
        }
        self.values.insert(key, (value.trim().to_string(), origin));
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<(&str, &Origin)> {
        self.values.get(key).map(|(v, o)| (v.as_str(), o))
    }

    /// Apply a named preset.
    pub fn apply_preset(&mut self, name: &str, origin: &Origin) -> Result<(), ConfigError> {
        let preset = presets::find(name).ok_or_else(|| {
            ConfigError::new(
                origin,
                "preset",
                format!("unknown preset `{name}` (known: {})", presets::names().join(", ")),
            )
        })?;
        for (k, v) in preset.values {
            self.set(k, v, Origin::Preset(name.to_string()))?;
        }
        Ok(())
    }

    /// Parse `key = value` lines. Blank lines and `#` comments are skipped.
    pub fn parse_file_contents(path: &Path, text: &str) -> Result<Self, ConfigError> {
        let mut out = Self::new();
        for (i, raw) in text.lines().enumerate() {
            let origin = Origin::File {
                path: path.to_path_buf(),
                line: i + 1,
            };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| ConfigError::new(&origin, line, "expected `key = value`"))?;
            out.set(k, v, origin)?;
        }
        Ok(out)
    }

    pub fn read_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            ConfigError::new(
                &Origin::File {
                    path: path.to_path_buf(),
                    line: 0,
                },
                "config",
                format!("cannot read file: {e}"),
            )
        })?;
        Self::parse_file_contents(path, &text)
    }

    /// Overlay `other` on top of `self`.
    pub fn merge(&mut self, other: Layers) {
        self.values.extend(other.values);
    }
}

/// A fully interpreted sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub gates: Vec<GateKind>,
    pub scenario: Scenario,
    /// Cells along `param1` and `param2`.
    pub grid: (usize, usize),
    /// Overrides of the default parameter ranges.
    pub param1_range: Option<(f64, f64)>,
    pub param2_range: Option<(f64, f64)>,
    pub delta: f64,
    pub p_inits: Vec<f64>,
    pub backend: Backend,
    pub n_samples: u64,
    pub seed: u64,
    pub serialization: Serialization,
    pub max_width: usize,
    pub output: PathBuf,
    pub json: Option<PathBuf>,
    pub threads: Option<usize>,
    pub allow_out_of_domain: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            gates: vec![GateKind::Ideal],
            scenario: Scenario::I,
            grid: (16, 16),
            param1_range: None,
            param2_range: None,
            delta: DEFAULT_DELTA,
            p_inits: vec![0.0],
            backend: Backend::ExactDm,
            n_samples: 0,
            seed: 0,
            serialization: Serialization::Concurrent,
            max_width: DEFAULT_MAX_WIDTH,
            output: PathBuf::from("sweep.csv"),
            json: None,
            threads: None,
            allow_out_of_domain: false,
        }
    }
}

fn parse_f64(v: &str, o: &Origin, field: &str) -> Result<f64, ConfigError> {
    let x: f64 = v
        .parse()
        .map_err(|_| ConfigError::new(o, field, format!("`{v}` is not a number")))?;
    if !x.is_finite() {
        return Err(ConfigError::new(o, field, "value must be finite"));
    }
    Ok(x)
}

fn parse_uint<T: std::str::FromStr>(v: &str, o: &Origin, field: &str) -> Result<T, ConfigError> {
    // Accept `2e5`-style counts as well as plain integers.
    if let Ok(x) = v.parse::<T>() {
        return Ok(x);
    }
    let f: f64 = v
        .parse()
        .map_err(|_| ConfigError::new(o, field, format!("`{v}` is not a non-negative integer")))?;
    if f >= 0.0 && f.fract() == 0.0 && f < 1.8e19 {
        format!("{}", f as u64)
            .parse::<T>()
            .map_err(|_| ConfigError::new(o, field, format!("`{v}` is out of range")))
    } else {
        Err(ConfigError::new(o, field, format!("`{v}` is not a non-negative integer")))
    }
}

fn parse_range(v: &str, o: &Origin, field: &str) -> Result<(f64, f64), ConfigError> {
    let parts: Vec<&str> = v.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(ConfigError::new(o, field, "expected `lo,hi`"));
    }
    let lo = parse_f64(parts[0], o, field)?;
    let hi = parse_f64(parts[1], o, field)?;
    if !(lo < hi) {
        return Err(ConfigError::new(o, field, "range must satisfy lo < hi"));
    }
    Ok((lo, hi))
}

fn parse_bool(v: &str, o: &Origin, field: &str) -> Result<bool, ConfigError> {
    match v.to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" | "on" => Ok(true),
        "0" | "false" | "no" | "off" => Ok(false),
        _ => Err(ConfigError::new(o, field, format!("`{v}` is not a boolean"))),
    }
}

fn parse_scenario(v: &str, o: &Origin) -> Result<Scenario, ConfigError> {
    match v {
        "I" | "i" | "1" => Ok(Scenario::I),
        "II" | "ii" | "2" => Ok(Scenario::II),
        _ => Err(ConfigError::new(o, "scenario", format!("`{v}` is not I or II"))),
    }
}

impl SweepConfig {
    /// Interpret layered values.
    pub fn from_layers(layers: &Layers) -> Result<Self, ConfigError> {
        let mut cfg = SweepConfig::default();
        let default = Origin::Default;

        let (gate_str, gate_origin) = layers
            .get("gate")
            .ok_or_else(|| ConfigError::new(&default, "gate", "no gate given (use --gate or --preset)"))?;
        let mut gates = Vec::new();
        for g in gate_str.split(',').map(str::trim) {
            let kind = GateKind::parse(g).ok_or_else(|| {
                ConfigError::new(
                    gate_origin,
                    "gate",
                    format!("`{g}` is not one of ideal, v1, v2, ldiv, ldiv_no_k2"),
                )
            })?;
            if gates.contains(&kind) {
                return Err(ConfigError::new(gate_origin, "gate", format!("`{g}` listed twice")));
            }
            gates.push(kind);
        }
        cfg.gates = gates;

        if let Some((v, o)) = layers.get("scenario") {
            cfg.scenario = parse_scenario(v, o)?;
        }
        if let Some((v, o)) = layers.get("grid") {
            let (a, b) = v
                .split_once(['x', 'X'])
                .ok_or_else(|| ConfigError::new(o, "grid", "expected `NxM`"))?;
            let n1: usize = parse_uint(a.trim(), o, "grid")?;
            let n2: usize = parse_uint(b.trim(), o, "grid")?;
            if n1 == 0 || n2 == 0 {
                return Err(ConfigError::new(o, "grid", "grid dimensions must be positive"));
            }
            cfg.grid = (n1, n2);
        }
        if let Some((v, o)) = layers.get("param1_range") {
            cfg.param1_range = Some(parse_range(v, o, "param1_range")?);
        }
        if let Some((v, o)) = layers.get("param2_range") {
            cfg.param2_range = Some(parse_range(v, o, "param2_range")?);
        }
        if let Some((v, o)) = layers.get("delta") {
            cfg.delta = parse_f64(v, o, "delta")?;
        }
        if let Some((v, o)) = layers.get("p_init") {
            let mut ps = Vec::new();
            for s in v.split(',').map(str::trim) {
                let p = parse_f64(s, o, "p_init")?;
                if !(0.0..=1.0).contains(&p) {
                    return Err(ConfigError::new(o, "p_init", format!("{p} is outside [0, 1]")));
                }
                ps.push(p);
            }
            cfg.p_inits = ps;
        }
        cfg.backend = match layers.get("backend") {
            Some(("exact", _)) => Backend::ExactDm,
            Some(("trajectory", _)) => Backend::Trajectory,
            Some((v, o)) => {
                return Err(ConfigError::new(o, "backend", format!("`{v}` is not exact or trajectory")))
            }
            None => match cfg.scenario {
                Scenario::I => Backend::ExactDm,
                Scenario::II => Backend::Trajectory,
            },
        };
        cfg.n_samples = match layers.get("n_samples") {
            Some((v, o)) => parse_uint(v, o, "n_samples")?,
            None => DEFAULT_TRAJECTORIES,
        };
        if cfg.backend == Backend::Trajectory && cfg.n_samples == 0 {
            let o = layers.get("n_samples").map(|(_, o)| o.clone()).unwrap_or(Origin::Default);
            return Err(ConfigError::new(&o, "n_samples", "trajectory backend needs n_samples > 0"));
        }
        if cfg.backend == Backend::ExactDm {
            cfg.n_samples = 0;
        }
        if let Some((v, o)) = layers.get("seed") {
            cfg.seed = parse_uint(v, o, "seed")?;
        }
        if let Some((v, o)) = layers.get("serialization") {
            cfg.serialization = match v {
                "concurrent" => Serialization::Concurrent,
                "serialized" => Serialization::Serialized,
                _ => {
                    return Err(ConfigError::new(
                        o,
                        "serialization",
                        format!("`{v}` is not concurrent or serialized"),
                    ))
                }
            };
        }
        if let Some((v, o)) = layers.get("max_width") {
            cfg.max_width = parse_uint(v, o, "max_width")?;
            if cfg.max_width == 0 {
                return Err(ConfigError::new(o, "max_width", "must be positive"));
            }
        }
        if let Some((v, o)) = layers.get("output") {
            if v.is_empty() {
                return Err(ConfigError::new(o, "output", "empty path"));
            }
            cfg.output = PathBuf::from(v);
        }
        if let Some((v, _)) = layers.get("json") {
            cfg.json = (!v.is_empty()).then(|| PathBuf::from(v));
        }
        if let Some((v, o)) = layers.get("threads") {
            let n: usize = parse_uint(v, o, "threads")?;
            if n == 0 {
                return Err(ConfigError::new(o, "threads", "must be positive"));
            }
            cfg.threads = Some(n);
        }
        if let Some((v, o)) = layers.get("allow_out_of_domain") {
            cfg.allow_out_of_domain = parse_bool(v, o, "allow_out_of_domain")?;
        }

        cfg.check_ranges(layers)?;
        Ok(cfg)
    }

    fn check_ranges(&self, layers: &Layers) -> Result<(), ConfigError> {
        let swept: Vec<GateKind> = self
            .gates
            .iter()
            .copied()
            .filter(|g| g.family() != Family::Ideal)
            .collect();
        let overridden = self.param1_range.is_some() || self.param2_range.is_some();
        if overridden && swept.windows(2).any(|w| w[0].family() != w[1].family()) {
            let o = layers
                .get("param1_range")
                .or_else(|| layers.get("param2_range"))
                .map(|(_, o)| o.clone())
                .unwrap_or(Origin::Default);
            return Err(ConfigError::new(
                &o,
                "param1_range",
                "explicit ranges are ambiguous when gates with different parameters are mixed",
            ));
        }
        if self.allow_out_of_domain {
            return Ok(());
        }
        for g in swept {
            let (d1, d2) = g.domain().expect("swept gates have a domain");
            for (field, range, dom) in [
                ("param1_range", self.param1_range, d1),
                ("param2_range", self.param2_range, d2),
            ] {
                if let Some((lo, hi)) = range {
                    if lo < dom.0 || hi > dom.1 {
                        let o = layers.get(field).map(|(_, o)| o.clone()).unwrap_or(Origin::Default);
                        return Err(ConfigError::new(
                            &o,
                            field,
                            format!(
                                "({lo}, {hi}) leaves the {} domain ({}, {}); pass allow_out_of_domain to override",
                                g.name(),
                                dom.0,
                                dom.1
                            ),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Parameter ranges used for `gate`.
    pub fn ranges(&self, gate: GateKind) -> Option<((f64, f64), (f64, f64))> {
        let (d1, d2) = gate.domain()?;
        Some((self.param1_range.unwrap_or(d1), self.param2_range.unwrap_or(d2)))
    }

    /// The gates of one series, ordered `param1`-major over cell centres.
    pub fn grid_points(&self, gate: GateKind) -> Vec<GateSpec> {
        let Some(((a1, b1), (a2, b2))) = self.ranges(gate) else {
            return vec![GateSpec::Ideal];
        };
        let xs = cell_centres(a1, b1, self.grid.0);
        let ys = cell_centres(a2, b2, self.grid.1);
        let mut out = Vec::with_capacity(xs.len() * ys.len());
        for &x in &xs {
            for &y in &ys {
                out.push(match gate {
                    GateKind::V1 | GateKind::V2 => GateSpec::Floating(FloatingGateParams {
                        r: x,
                        gamma_ratio: y,
                        variant: if gate == GateKind::V1 {
                            Variant::V1
                        } else {
                            Variant::V2
                        },
                    }),
                    GateKind::Ldiv | GateKind::LdivNoK2 => GateSpec::Ldiv(LdivParams {
                        t: x,
                        gamma: y,
                        delta: self.delta,
                        include_k2: gate == GateKind::Ldiv,
                    }),
                    GateKind::Ideal => unreachable!(),
                });
            }
        }
        out
    }
}

/// Centres of `n` equal cells spanning `(lo, hi)`.
pub fn cell_centres(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let w = (hi - lo) / n as f64;
    (0..n).map(|i| lo + (i as f64 + 0.5) * w).collect()
}
