//! Flat `key = value` scenario files. Every key doubles as a `--key` flag.

use std::fmt;
use std::path::{Path, PathBuf};

use dipole_phase::Vec3;
use serde_json::{json, Map, Value};

/// Recognised keys with their help text.
pub const KEYS: &[(&str, &str)] = &[
    ("b0", "slab field B0 in gauss"),
    ("y0", "slab thickness y0 in cm"),
    (
        "thin_sheet",
        "collapse the slab to a sheet of flux density B0 y0 (true/false)",
    ),
    ("a", "distance of the path from the sheet plane in cm"),
    ("z_i", "start of the path along z in cm"),
    ("z_f", "end of the path along z in cm"),
    ("dipole", "hydrogen-2s2p or custom"),
    (
        "dipole_sign",
        "sign of the hydrogen dipole eigenstate (+1 or -1)",
    ),
    ("d", "custom dipole moment \"dx, dy, dz\" in esu cm"),
    ("rel_tol", "relative quadrature tolerance"),
    ("abs_tol", "absolute quadrature tolerance"),
    ("max_evals", "maximum integrand evaluations per component"),
    ("gauge", "step or quadratic-shifted"),
    ("lambda", "quadratic-shifted gauge parameter in G/cm"),
    (
        "method",
        "phase: endpoint, path or both; interfere: closed-form or endpoint",
    ),
    ("sweep_min", "first sweep value"),
    ("sweep_max", "last sweep value"),
    ("sweep_points", "number of sweep points"),
    ("loop_y_min", "loop lower y in cm"),
    ("loop_y_max", "loop upper y in cm"),
    ("loop_z_min", "loop lower z in cm"),
    ("loop_z_max", "loop upper z in cm"),
    ("n_e_volts", "electric sheet strength in volts"),
    ("mu_z", "spin moment along z in nuclear magnetons"),
    ("format", "json or csv"),
    ("output", "output path (stdout when absent)"),
];

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub source: Option<PathBuf>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.source, self.line) {
            (Some(p), Some(l)) => write!(f, "{}:{l}: {}", p.display(), self.message),
            (None, Some(l)) => write!(f, "line {l}: {}", self.message),
            _ => write!(f, "{}", self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

impl ConfigError {
    pub fn new(message: impl Into<String>) -> Self {
        Self {
            line: None,
            source: None,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DipoleChoice {
    Hydrogen { sign: f64 },
    Custom(Vec3),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub b0: f64,
    pub y0: f64,
    pub thin_sheet: bool,
    pub a: f64,
    pub z_i: f64,
    pub z_f: f64,
    pub dipole: DipoleChoice,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_evals: u64,
    pub gauge: String,
    pub lambda: f64,
    pub method: Option<String>,
    pub sweep_min: Option<f64>,
    pub sweep_max: Option<f64>,
    pub sweep_points: Option<usize>,
    pub loop_y: (Option<f64>, Option<f64>),
    pub loop_z: (Option<f64>, Option<f64>),
    pub n_e_volts: f64,
    pub mu_z: f64,
    pub format: Format,
    pub output: Option<PathBuf>,
    custom_d: Option<Vec3>,
    dipole_kind: String,
    dipole_sign: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            b0: 100.0,
            y0: 0.01,
            thin_sheet: true,
            a: 1.0,
            z_i: -20.0,
            z_f: 20.0,
            dipole: DipoleChoice::Hydrogen { sign: 1.0 },
            rel_tol: 1e-6,
            abs_tol: 1e-12,
            max_evals: 10_000_000,
            gauge: "step".into(),
            lambda: 1e-3,
            method: None,
            sweep_min: None,
            sweep_max: None,
            sweep_points: None,
            loop_y: (None, None),
            loop_z: (None, None),
            n_e_volts: 1.0,
            mu_z: dipole_phase::constants::NEUTRON_MOMENT_IN_MU_N,
            format: Format::Json,
            output: None,
            custom_d: None,
            dipole_kind: "hydrogen-2s2p".into(),
            dipole_sign: 1.0,
        }
    }
}

fn number(key: &str, value: &str) -> Result<f64, String> {
    let v: f64 = value
        .parse()
        .map_err(|_| format!("`{key}` expects a number, got `{value}`"))?;
    if !v.is_finite() {
        return Err(format!("`{key}` must be finite"));
    }
    Ok(v)
}

fn boolean(key: &str, value: &str) -> Result<bool, String> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(format!("`{key}` expects true or false, got `{value}`")),
    }
}

impl ScenarioConfig {
    /// Applies one `key = value` setting. Keys may use `-` or `_`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let key = key.replace('-', "_");
        let value = value.trim();
        match key.as_str() {
            "b0" => self.b0 = number(&key, value)?,
            "y0" => self.y0 = number(&key, value)?,
            "thin_sheet" => self.thin_sheet = boolean(&key, value)?,
            "a" => self.a = number(&key, value)?,
            "z_i" => self.z_i = number(&key, value)?,
            "z_f" => self.z_f = number(&key, value)?,
            "dipole" => match value {
                "hydrogen-2s2p" | "custom" => self.dipole_kind = value.into(),
                _ => {
                    return Err(format!(
                        "`dipole` must be hydrogen-2s2p or custom, got `{value}`"
                    ))
                }
            },
            "dipole_sign" => {
                let s = number(&key, value)?;
                if s != 1.0 && s != -1.0 {
                    return Err("`dipole_sign` must be +1 or -1".into());
                }
                self.dipole_sign = s;
            }
            "d" => {
                let parts: Vec<&str> = value.split(',').map(str::trim).collect();
                if parts.len() != 3 {
                    return Err(format!(
                        "`d` expects three comma-separated numbers, got `{value}`"
                    ));
                }
                let c: Vec<f64> = parts
                    .iter()
                    .map(|p| number("d", p))
                    .collect::<Result<_, _>>()?;
                self.custom_d = Some(Vec3::new(c[0], c[1], c[2]));
            }
            "rel_tol" => self.rel_tol = number(&key, value)?,
            "abs_tol" => self.abs_tol = number(&key, value)?,
            "max_evals" => {
                self.max_evals = value
                    .parse()
                    .map_err(|_| format!("`max_evals` expects a positive integer, got `{value}`"))?
            }
            "gauge" => self.gauge = value.into(),
            "lambda" => self.lambda = number(&key, value)?,
            "method" => self.method = Some(value.into()),
            "sweep_min" => self.sweep_min = Some(number(&key, value)?),
            "sweep_max" => self.sweep_max = Some(number(&key, value)?),
            "sweep_points" => {
                self.sweep_points = Some(
                    value
                        .parse()
                        .map_err(|_| format!("`sweep_points` expects an integer, got `{value}`"))?,
                )
            }
            "loop_y_min" => self.loop_y.0 = Some(number(&key, value)?),
            "loop_y_max" => self.loop_y.1 = Some(number(&key, value)?),
            "loop_z_min" => self.loop_z.0 = Some(number(&key, value)?),
            "loop_z_max" => self.loop_z.1 = Some(number(&key, value)?),
            "n_e_volts" => self.n_e_volts = number(&key, value)?,
            "mu_z" => self.mu_z = number(&key, value)?,
            "format" => {
                self.format = match value {
                    "json" => Format::Json,
                    "csv" => Format::Csv,
                    _ => return Err(format!("`format` must be json or csv, got `{value}`")),
                }
            }
            "output" => self.output = Some(PathBuf::from(value)),
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }

    #[cfg(test)]
    pub fn parse_str(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        cfg.apply_str(text)?;
        Ok(cfg)
    }

    pub fn apply_str(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| ConfigError {
                line: Some(i + 1),
                source: None,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, got `{line}`")))?;
            let key = key.trim();
            if key.is_empty() {
                return Err(err("missing key".into()));
            }
            self.set(key, value).map_err(err)?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
            line: None,
            source: Some(path.to_path_buf()),
            message: format!("cannot read {}: {e}", path.display()),
        })?;
        self.apply_str(&text).map_err(|mut e| {
            e.source = Some(path.to_path_buf());
            e
        })
    }

    /// Checks cross-field constraints and resolves the dipole choice.
    pub fn validate(&mut self) -> Result<(), ConfigError> {
        let fail = |m: &str| Err(ConfigError::new(m));
        if self.a <= 0.0 {
            return fail("`a` must be positive (path strictly outside the slab)");
        }
        if self.z_i >= self.z_f {
            return fail("`z_i` must be less than `z_f`");
        }
        if self.y0 <= 0.0 {
            return fail("`y0` must be positive");
        }
        if self.b0 == 0.0 {
            return fail("`b0` must be nonzero");
        }
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return fail("tolerances must be positive");
        }
        if self.max_evals == 0 {
            return fail("`max_evals` must be positive");
        }
        if let Some(n) = self.sweep_points {
            if !(2..=1_000_000).contains(&n) {
                return fail("`sweep_points` must lie in [2, 1000000]");
            }
        }
        if let (Some(lo), Some(hi)) = (self.sweep_min, self.sweep_max) {
            if lo >= hi {
                return fail("`sweep_min` must be less than `sweep_max`");
            }
        }
        if !matches!(self.gauge.as_str(), "step" | "quadratic-shifted") {
            return fail("`gauge` must be step or quadratic-shifted");
        }
        self.dipole = match self.dipole_kind.as_str() {
            "custom" => match self.custom_d {
                Some(d) => DipoleChoice::Custom(d),
                None => return fail("`dipole = custom` needs `d`"),
            },
            _ => DipoleChoice::Hydrogen {
                sign: self.dipole_sign,
            },
        };
        Ok(())
    }

    pub fn flux_density(&self) -> f64 {
        self.b0 * self.y0
    }

    /// Effective settings for the output's `inputs` block.
    pub fn inputs(&self) -> Value {
        let mut m = Map::new();
        m.insert("b0".into(), json!(self.b0));
        m.insert("y0".into(), json!(self.y0));
        m.insert("thin_sheet".into(), json!(self.thin_sheet));
        m.insert("n_b".into(), json!(self.flux_density()));
        m.insert("a".into(), json!(self.a));
        m.insert("z_i".into(), json!(self.z_i));
        m.insert("z_f".into(), json!(self.z_f));
        match self.dipole {
            DipoleChoice::Hydrogen { sign } => {
                m.insert("dipole".into(), json!("hydrogen-2s2p"));
                m.insert("dipole_sign".into(), json!(sign));
            }
            DipoleChoice::Custom(d) => {
                m.insert("dipole".into(), json!("custom"));
                m.insert("d".into(), json!(d.to_array()));
            }
        }
        m.insert("rel_tol".into(), json!(self.rel_tol));
        m.insert("abs_tol".into(), json!(self.abs_tol));
        m.insert("max_evals".into(), json!(self.max_evals));
        m.insert("gauge".into(), json!(self.gauge));
        m.insert("lambda".into(), json!(self.lambda));
        if let Some(method) = &self.method {
            m.insert("method".into(), json!(method));
        }
        Value::Object(m)
    }
}
