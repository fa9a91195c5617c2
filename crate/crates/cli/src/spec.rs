//! Run specifications: the `key=value` / JSON configuration format, length
//! and grid syntax, and validation.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use casimir_core::{Formalism, ImpedanceKind, QuadratureConfig};

use crate::{CliError, Result};

/// Every key understood by the configuration format, in serialization order.
pub const KEYS: [&str; 11] = [
    "command",
    "material",
    "model",
    "formalism",
    "T",
    "a",
    "grid",
    "R",
    "rel_tol",
    "max_subdivisions",
    "out",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Command {
    Point,
    Scan,
    Figure1,
    Figure2,
    Coefficients,
    ThermalRatio,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::Point,
        Command::Scan,
        Command::Figure1,
        Command::Figure2,
        Command::Coefficients,
        Command::ThermalRatio,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Point => "point",
            Command::Scan => "scan",
            Command::Figure1 => "figure1",
            Command::Figure2 => "figure2",
            Command::Coefficients => "coefficients",
            Command::ThermalRatio => "thermal-ratio",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| {
                format!("unknown command `{s}` (expected point, scan, figure1, figure2, coefficients or thermal-ratio)")
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Spacing {
    Linear,
    Log,
}

/// Separation grid `min:max:count[:log|lin]`, in meters once parsed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl Grid {
    pub fn new(
        min: f64,
        max: f64,
        count: usize,
        spacing: Spacing,
    ) -> std::result::Result<Self, String> {
        if !(min.is_finite() && min > 0.0) {
            return Err(format!("minimum {min:e} m must be finite and > 0"));
        }
        if !(max.is_finite() && max > min) {
            return Err(format!(
                "maximum {max:e} m must be finite and above the minimum"
            ));
        }
        if count < 2 {
            return Err(format!("count {count} must be at least 2"));
        }
        Ok(Self {
            min,
            max,
            count,
            spacing,
        })
    }

    /// The grid nodes; the end points are exact.
    pub fn points(&self) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i == 0 {
                    return self.min;
                }
                if i == self.count - 1 {
                    return self.max;
                }
                let s = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.min + s * (self.max - self.min),
                    Spacing::Log => self.min * (self.max / self.min).powf(s),
                }
            })
            .collect()
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let spacing = match self.spacing {
            Spacing::Linear => "lin",
            Spacing::Log => "log",
        };
        write!(f, "{:e}:{:e}:{}:{spacing}", self.min, self.max, self.count)
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let spacing = match parts.get(3) {
            None | Some(&"lin") => Spacing::Linear,
            Some(&"log") => Spacing::Log,
            Some(other) => return Err(format!("spacing `{other}` must be `log` or `lin`")),
        };
        if !(3..=4).contains(&parts.len()) {
            return Err(format!("`{s}` is not of the form min:max:count[:log|lin]"));
        }
        let count = parts[2]
            .parse()
            .map_err(|_| format!("count `{}` is not a whole number", parts[2]))?;
        Grid::new(
            parse_length(parts[0])?,
            parse_length(parts[1])?,
            count,
            spacing,
        )
    }
}

/// Parses a length in meters, with an optional `nm`, `um`, `mm` or `m`
/// suffix.
pub fn parse_length(text: &str) -> std::result::Result<f64, String> {
    let text = text.trim();
    let (number, shift) = [
        ("nm", -9),
        ("um", -6),
        ("µm", -6),
        ("μm", -6),
        ("mm", -3),
        ("m", 0),
    ]
    .into_iter()
    .find_map(|(suffix, shift)| text.strip_suffix(suffix).map(|n| (n, shift)))
    .unwrap_or((text, 0));
    let bad = || format!("`{text}` is not a length (a number with optional nm, um, mm or m)");
    // The suffix goes into the decimal exponent so that `0.1um` rounds
    // exactly like `1e-7`.
    let number = number.trim();
    let (mantissa, exponent) = match number.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|_| bad())?),
        None => (number, 0),
    };
    let value: f64 = format!("{mantissa}e{}", exponent + shift)
        .parse()
        .map_err(|_| bad())?;
    if !(value.is_finite() && value > 0.0) {
        return Err(format!("length `{text}` must be finite and > 0"));
    }
    Ok(value)
}

fn field(name: &str, message: impl Into<String>) -> CliError {
    CliError::Field {
        field: name.to_string(),
        message: message.into(),
    }
}

/// Unvalidated key/value settings, as read from a file or from flags.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawSpec {
    values: BTreeMap<&'static str, String>,
}

impl RawSpec {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sets `key`, replacing any earlier value. Unknown keys are rejected.
    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<()> {
        let key = KEYS.into_iter().find(|k| *k == key).ok_or_else(|| {
            field(
                key,
                format!("unknown key (known keys: {})", KEYS.join(", ")),
            )
        })?;
        self.values.insert(key, value.into().trim().to_string());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Values of `other` win.
    pub fn merge(&mut self, other: &RawSpec) {
        for (k, v) in &other.values {
            self.values.insert(k, v.clone());
        }
    }

    /// Accepts a JSON object (when the text starts with `{`) or `key=value`
    /// lines with `#` comment lines.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::parse_json(text)
        } else {
            Self::parse_key_value(text)
        }
    }

    fn parse_key_value(text: &str) -> Result<Self> {
        let mut raw = Self::new();
        for (index, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                field(
                    "config",
                    format!("line {}: expected key=value, got `{line}`", index + 1),
                )
            })?;
            let key = key.trim();
            if raw.get(key).is_some() {
                return Err(field(key, format!("line {}: duplicate key", index + 1)));
            }
            raw.set(key, value)?;
        }
        Ok(raw)
    }

    fn parse_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| field("config", format!("invalid JSON: {e}")))?;
        let object = value
            .as_object()
            .ok_or_else(|| field("config", "JSON configuration must be an object"))?;
        let mut raw = Self::new();
        for (key, value) in object {
            let text = match value {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Number(n) => n.to_string(),
                _ => return Err(field(key, "value must be a string or a number")),
            };
            raw.set(key, text)?;
        }
        Ok(raw)
    }
}

/// A validated run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub command: Command,
    /// Preset name or path of a material file.
    pub material: Option<String>,
    pub model: ImpedanceKind,
    pub formalism: Formalism,
    /// Kelvin; zero selects the zero-temperature operations.
    pub temperature: f64,
    pub separation: Option<f64>,
    pub grid: Option<Grid>,
    pub sphere_radius: Option<f64>,
    pub rel_tol: Option<f64>,
    /// Panel budget of each adaptive pass.
    pub max_subdivisions: Option<usize>,
    pub out: Option<PathBuf>,
}

fn number(raw: &RawSpec, key: &str) -> Result<Option<f64>> {
    raw.get(key)
        .map(|v| {
            v.parse::<f64>()
                .map_err(|_| field(key, format!("`{v}` is not a number")))
        })
        .transpose()
}

fn length(raw: &RawSpec, key: &str) -> Result<Option<f64>> {
    raw.get(key)
        .map(|v| parse_length(v).map_err(|m| field(key, m)))
        .transpose()
}

impl RunSpec {
    pub fn from_raw(raw: &RawSpec) -> Result<Self> {
        let command: Command = raw
            .get("command")
            .ok_or_else(|| field("command", "missing required key"))?
            .parse()
            .map_err(|m: String| field("command", m))?;
        let model = match raw.get("model") {
            Some(m) => m.parse().map_err(|e: String| field("model", e))?,
            None => ImpedanceKind::PlasmaExact,
        };
        let formalism = match raw.get("formalism") {
            Some(f) => f.parse().map_err(|e: String| field("formalism", e))?,
            None => Formalism::Impedance,
        };
        let temperature = number(raw, "T")?.unwrap_or(0.0);
        if !(temperature.is_finite() && temperature >= 0.0) {
            return Err(field(
                "T",
                format!("temperature {temperature} K must be finite and >= 0"),
            ));
        }
        let rel_tol = number(raw, "rel_tol")?;
        if let Some(tol) = rel_tol {
            QuadratureConfig::default()
                .with_rel_tol(tol)
                .validate()
                .map_err(|e| field("rel_tol", e.to_string()))?;
        }
        let max_subdivisions = raw
            .get("max_subdivisions")
            .map(|v| {
                v.parse::<usize>().ok().filter(|&n| n >= 10).ok_or_else(|| {
                    field(
                        "max_subdivisions",
                        format!("`{v}` must be a whole number >= 10"),
                    )
                })
            })
            .transpose()?;
        let grid = raw
            .get("grid")
            .map(|g| g.parse::<Grid>().map_err(|m| field("grid", m)))
            .transpose()?;
        let spec = Self {
            command,
            material: raw
                .get("material")
                .filter(|m| !m.is_empty())
                .map(str::to_string),
            model,
            formalism,
            temperature,
            separation: length(raw, "a")?,
            grid,
            sphere_radius: length(raw, "R")?,
            rel_tol,
            max_subdivisions,
            out: raw.get("out").filter(|o| !o.is_empty()).map(PathBuf::from),
        };
        spec.check_consistency()?;
        Ok(spec)
    }

    fn check_consistency(&self) -> Result<()> {
        let name = self.command.name();
        let needs_material = self.model.needs_material()
            || matches!(
                self.command,
                Command::Figure1 | Command::Figure2 | Command::Coefficients
            );
        if needs_material && self.material.is_none() {
            let why = if self.model.needs_material() {
                format!("model {} needs a material preset or file", self.model)
            } else {
                format!("{name} needs a material preset or file")
            };
            return Err(field("material", why));
        }
        match self.command {
            Command::Point => {
                if self.separation.is_none() {
                    return Err(field("a", "missing required key for point"));
                }
                if self.grid.is_some() {
                    return Err(field(
                        "grid",
                        "point takes a single separation; use scan for grids",
                    ));
                }
            }
            Command::Scan | Command::Figure1 | Command::Figure2 => {
                if self.grid.is_none() {
                    return Err(field("grid", format!("missing required key for {name}")));
                }
                if self.separation.is_some() {
                    return Err(field(
                        "a",
                        format!("{name} takes a grid, not a single separation"),
                    ));
                }
            }
            Command::ThermalRatio => match (self.separation, self.grid) {
                (None, None) => {
                    return Err(field("a", "thermal-ratio needs a separation or a grid"))
                }
                (Some(_), Some(_)) => return Err(field("grid", "give either a or grid, not both")),
                _ => {}
            },
            Command::Coefficients => {
                if self.separation.is_some() {
                    return Err(field(
                        "a",
                        "coefficients takes an optional grid, not a single separation",
                    ));
                }
            }
        }
        if matches!(
            self.command,
            Command::Figure1 | Command::Figure2 | Command::Coefficients
        ) && self.temperature > 0.0
        {
            return Err(field(
                "T",
                format!("{name} is a zero-temperature computation"),
            ));
        }
        if self.sphere_radius.is_some() && !matches!(self.command, Command::Point | Command::Scan) {
            return Err(field(
                "R",
                "only point and scan compute the sphere-plate force",
            ));
        }
        Ok(())
    }

    /// The separations of the run, in grid order.
    pub fn separations(&self) -> Vec<f64> {
        match (self.separation, self.grid) {
            (Some(a), _) => vec![a],
            (None, Some(grid)) => grid.points(),
            (None, None) => Vec::new(),
        }
    }

    /// Serializes to the `key=value` format; parsing the result gives back
    /// an identical spec.
    pub fn to_config(&self) -> String {
        let mut out = String::new();
        let mut push = |key: &str, value: String| {
            out.push_str(key);
            out.push('=');
            out.push_str(&value);
            out.push('\n');
        };
        push("command", self.command.to_string());
        if let Some(m) = &self.material {
            push("material", m.clone());
        }
        push("model", self.model.to_string());
        push("formalism", self.formalism.to_string());
        push("T", format!("{:e}", self.temperature));
        if let Some(a) = self.separation {
            push("a", format!("{a:e}"));
        }
        if let Some(g) = self.grid {
            push("grid", g.to_string());
        }
        if let Some(r) = self.sphere_radius {
            push("R", format!("{r:e}"));
        }
        if let Some(t) = self.rel_tol {
            push("rel_tol", format!("{t:e}"));
        }
        if let Some(n) = self.max_subdivisions {
            push("max_subdivisions", n.to_string());
        }
        if let Some(o) = &self.out {
            push("out", o.display().to_string());
        }
        out
    }
}

/// Reads the configuration file (if any), applies `flags` on top and
/// validates the result.
pub fn parse_config(path: Option<&Path>, flags: &RawSpec) -> Result<RunSpec> {
    let mut raw = match path {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
            RawSpec::parse(&text)?
        }
        None => RawSpec::new(),
    };
    raw.merge(flags);
    RunSpec::from_raw(&raw)
}
