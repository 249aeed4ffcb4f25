//! Run configuration: command-line flags over a key=value file over defaults.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use fuzzy_coulomb::spectrum::Branch;

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Nmax {
    Fixed(usize),
    Auto,
}

impl std::str::FromStr for Nmax {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Nmax::Auto);
        }
        s.parse::<usize>()
            .map(Nmax::Fixed)
            .map_err(|_| format!("expected a non-negative integer or 'auto', got '{s}'"))
    }
}

/// Values a user may set; `None` means "not given at this layer".
#[derive(Debug, Clone, Default)]
pub struct Layer {
    pub lambda: Option<f64>,
    pub q: Option<f64>,
    pub nmax: Option<Nmax>,
    pub jmax: Option<u32>,
    pub n: Option<u32>,
    pub branch: Option<Branch>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub tolerances: BTreeMap<String, f64>,
}

impl Layer {
    /// Fills every unset field of `self` from `lower`.
    pub fn over(mut self, lower: Layer) -> Layer {
        self.lambda = self.lambda.or(lower.lambda);
        self.q = self.q.or(lower.q);
        self.nmax = self.nmax.or(lower.nmax);
        self.jmax = self.jmax.or(lower.jmax);
        self.n = self.n.or(lower.n);
        self.branch = self.branch.or(lower.branch);
        self.format = self.format.or(lower.format);
        self.out = self.out.or(lower.out);
        for (k, v) in lower.tolerances {
            self.tolerances.entry(k).or_insert(v);
        }
        self
    }
}

/// Tolerance names accepted as `tolerance.<name>`.
pub const TOLERANCE_KEYS: [&str; 4] = ["numeric", "tail", "residual", "scatter"];

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub lambda: f64,
    pub q: f64,
    pub nmax: Nmax,
    pub jmax: u32,
    pub n: u32,
    pub branch: Branch,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub tolerances: BTreeMap<String, f64>,
}

impl RunConfig {
    pub fn tolerance(&self, key: &str) -> f64 {
        self.tolerances[key]
    }
}

pub fn defaults() -> Layer {
    Layer {
        lambda: Some(0.1),
        q: Some(1.0),
        nmax: Some(Nmax::Fixed(64)),
        jmax: Some(2),
        n: Some(3),
        branch: Some(Branch::I),
        format: Some(Format::Csv),
        out: None,
        tolerances: BTreeMap::from([
            ("numeric".to_string(), 1e-10),
            ("tail".to_string(), 1e-12),
            ("residual".to_string(), 1e-8),
            ("scatter".to_string(), 1e-12),
        ]),
    }
}

fn parse_branch(s: &str) -> Result<Branch, ConfigError> {
    match s.trim() {
        "I" | "i" | "1" => Ok(Branch::I),
        "II" | "ii" | "2" => Ok(Branch::II),
        other => Err(ConfigError(format!("branch must be I or II, got '{other}'"))),
    }
}

pub fn branch_arg(s: &str) -> Result<Branch, String> {
    parse_branch(s).map_err(|e| e.0)
}

/// Parses a flat `key = value` file. `#` starts a comment.
pub fn parse_file(text: &str, path: &Path) -> Result<Layer, ConfigError> {
    let mut layer = Layer::default();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| ConfigError(format!("{}:{}: {msg}", path.display(), no + 1));
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(format!("expected key = value, got '{line}'")))?;
        let (key, value) = (key.trim(), value.trim());
        let num = |v: &str| {
            v.parse::<f64>()
                .map_err(|_| err(format!("'{key}' needs a number, got '{v}'")))
        };
        let int = |v: &str| {
            v.parse::<u32>()
                .map_err(|_| err(format!("'{key}' needs an integer, got '{v}'")))
        };
        match key {
            "lambda" => layer.lambda = Some(num(value)?),
            "q" => layer.q = Some(num(value)?),
            "nmax" => layer.nmax = Some(value.parse().map_err(err)?),
            "jmax" | "j_max" => layer.jmax = Some(int(value)?),
            "n" | "n_max_quantum" => layer.n = Some(int(value)?),
            "branch" => layer.branch = Some(parse_branch(value).map_err(|e| err(e.0))?),
            "format" => {
                layer.format = Some(match value {
                    "json" => Format::Json,
                    "csv" => Format::Csv,
                    other => return Err(err(format!("format must be json or csv, got '{other}'"))),
                })
            }
            "out" | "output_dir" => layer.out = Some(PathBuf::from(value)),
            _ => match key.strip_prefix("tolerance.") {
                Some(name) if TOLERANCE_KEYS.contains(&name) => {
                    layer.tolerances.insert(name.to_string(), num(value)?);
                }
                _ => return Err(err(format!("unknown key '{key}'"))),
            },
        }
    }
    Ok(layer)
}

/// Flags, then the config file, then per-command defaults, then [`defaults`].
pub fn resolve(flags: Layer, file: Option<&Path>, command: Layer) -> Result<RunConfig, ConfigError> {
    let file_layer = match file {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| ConfigError(format!("cannot read config {}: {e}", p.display())))?;
            parse_file(&text, p)?
        }
        None => Layer::default(),
    };
    let l = flags.over(file_layer).over(command).over(defaults());
    let cfg = RunConfig {
        lambda: l.lambda.unwrap(),
        q: l.q.unwrap(),
        nmax: l.nmax.unwrap(),
        jmax: l.jmax.unwrap(),
        n: l.n.unwrap(),
        branch: l.branch.unwrap(),
        format: l.format.unwrap(),
        out: l.out,
        tolerances: l.tolerances,
    };
    if !(cfg.lambda.is_finite() && cfg.lambda > 0.0) {
        return Err(ConfigError(format!("lambda must be positive, got {}", cfg.lambda)));
    }
    if !cfg.q.is_finite() {
        return Err(ConfigError("q must be finite".into()));
    }
    if cfg.n == 0 {
        return Err(ConfigError("n must be at least 1".into()));
    }
    for (k, v) in &cfg.tolerances {
        if !(v.is_finite() && *v > 0.0) {
            return Err(ConfigError(format!("tolerance.{k} must be positive, got {v}")));
        }
    }
    Ok(cfg)
}
