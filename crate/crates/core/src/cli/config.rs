//! Run configuration: key-value files, symbolic literals and the merged
//! settings a scenario reads.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use crate::analytic::FarfieldMode;
use crate::error::{Error, Result};
use crate::linsolve::{GmresSettings, LinearSolver};
use crate::lsq::NewtonOptions;

/// Keys accepted in config files and their command-line counterparts.
pub const KEYS: &[&str] = &[
    "scenario",
    "mesh",
    "node",
    "ele",
    "grid",
    "n",
    "refinements",
    "a",
    "gamma",
    "alpha",
    "k",
    "r_far",
    "tol",
    "sigma",
    "solver",
    "gmres_restart",
    "gmres_cap",
    "farfield_mode",
    "farfield_stream",
    "omega",
    "case",
    "patch",
    "rescales",
    "out",
];

/// Evaluate a numeric literal. Besides plain numbers this accepts products
/// of factors joined by `*`, each an optional number followed by any of
/// `pi`, `a` (the scenario length scale), `deg` (degrees to radians) or
/// `sqrtN`: `6pi`, `2pia`, `2pia*sqrt3`, `15deg`, `-0.25`.
pub fn parse_literal(text: &str, a: Option<f64>) -> Result<f64> {
    let bad = || Error::Config(format!("cannot read '{text}' as a number"));
    let text = text.trim();
    if text.is_empty() {
        return Err(bad());
    }
    let (sign, body) = match text.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, text),
    };
    let mut value = sign;
    for factor in body.split('*') {
        let factor = factor.trim();
        let split = factor
            .char_indices()
            .find(|&(i, c)| c.is_ascii_alphabetic() && !is_exponent(factor, i))
            .map_or(factor.len(), |(i, _)| i);
        let (num, mut units) = factor.split_at(split);
        let mut f = if num.is_empty() { 1.0 } else { num.parse::<f64>().map_err(|_| bad())? };
        if num.is_empty() && units.is_empty() {
            return Err(bad());
        }
        while !units.is_empty() {
            if let Some(rest) = units.strip_prefix("pi") {
                f *= PI;
                units = rest;
            } else if let Some(rest) = units.strip_prefix("deg") {
                f *= PI / 180.0;
                units = rest;
            } else if let Some(rest) = units.strip_prefix("sqrt") {
                let end = rest
                    .find(|c: char| !(c.is_ascii_digit() || c == '.'))
                    .unwrap_or(rest.len());
                let arg: f64 = rest[..end].parse().map_err(|_| bad())?;
                f *= arg.sqrt();
                units = &rest[end..];
            } else if let Some(rest) = units.strip_prefix('a') {
                f *= a.ok_or_else(|| Error::Config(format!("'{text}' uses 'a' but the scenario has no radius")))?;
                units = rest;
            } else {
                return Err(bad());
            }
        }
        value *= f;
    }
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

// `1e-5` keeps its exponent marker in the numeric part
fn is_exponent(s: &str, i: usize) -> bool {
    let b = s.as_bytes();
    (b[i] == b'e' || b[i] == b'E')
        && i > 0
        && b[i - 1].is_ascii_digit()
        && b.get(i + 1).is_some_and(|&c| c.is_ascii_digit() || c == b'-' || c == b'+')
}

/// Read `key = value` lines. `#` starts a comment; keys use underscores or
/// dashes interchangeably.
pub fn parse_kv(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key = value", n + 1)))?;
        let key = k.trim().replace('-', "_");
        if !KEYS.contains(&key.as_str()) {
            return Err(Error::Config(format!("line {}: unknown key '{}'", n + 1, k.trim())));
        }
        out.insert(key, v.trim().to_string());
    }
    Ok(out)
}

/// Where the mesh comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum MeshSource {
    /// The scenario's generator with an optional `--grid` description.
    Generated(Option<String>),
    /// Triangle `.node` / `.ele` files.
    Files { node: PathBuf, ele: PathBuf },
}

/// Merged settings for one invocation: defaults, then the config file, then
/// flags.
#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    values: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(Self { values: parse_kv(&text)? })
    }

    /// Set a key unless `value` is `None`.
    pub fn set(&mut self, key: &str, value: Option<impl ToString>) -> Result<()> {
        if !KEYS.contains(&key) {
            return Err(Error::Config(format!("unknown key '{key}'")));
        }
        if let Some(v) = value {
            self.values.insert(key.to_string(), v.to_string());
        }
        Ok(())
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn scenario(&self) -> Option<&str> {
        self.raw("scenario")
    }

    pub fn out_dir(&self) -> PathBuf {
        PathBuf::from(self.raw("out").unwrap_or("out"))
    }

    /// Numeric value with symbolic literals resolved against radius `a`.
    pub fn number(&self, key: &str, a: Option<f64>) -> Result<Option<f64>> {
        self.raw(key).map(|v| parse_literal(v, a)).transpose()
    }

    pub fn number_or(&self, key: &str, a: Option<f64>, default: f64) -> Result<f64> {
        Ok(self.number(key, a)?.unwrap_or(default))
    }

    pub fn count_or(&self, key: &str, default: usize) -> Result<usize> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => v
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("{key} must be a nonnegative integer (got '{v}')"))),
        }
    }

    /// Exactly one mesh source: a grid description or mesh files.
    pub fn mesh_source(&self) -> Result<MeshSource> {
        let grid = self.raw("grid").map(str::to_string);
        let files = match (self.raw("mesh"), self.raw("node"), self.raw("ele")) {
            (None, None, None) => None,
            (Some(base), None, None) => Some((PathBuf::from(format!("{base}.node")), PathBuf::from(format!("{base}.ele")))),
            (None, Some(n), Some(e)) => Some((PathBuf::from(n), PathBuf::from(e))),
            _ => return Err(Error::Config("give either --mesh BASE or both --node and --ele".into())),
        };
        match (grid, files) {
            (Some(_), Some(_)) => Err(Error::Config("choose one mesh source: --grid or mesh files".into())),
            (None, Some((node, ele))) => Ok(MeshSource::Files { node, ele }),
            (g, None) => Ok(MeshSource::Generated(g)),
        }
    }

    pub fn farfield_mode(&self) -> Result<FarfieldMode> {
        match self.raw("farfield_mode") {
            None | Some("corrected") => Ok(FarfieldMode::Corrected),
            Some("paper") => Ok(FarfieldMode::Paper),
            Some(o) => Err(Error::Config(format!("farfield mode must be paper or corrected (got '{o}')"))),
        }
    }

    /// Newton options starting from a scenario's defaults.
    pub fn newton(&self, base: NewtonOptions) -> Result<NewtonOptions> {
        let mut o = base;
        if let Some(t) = self.number("tol", None)? {
            if !(t > 0.0) {
                return Err(Error::Config("tol must be positive".into()));
            }
            o.tol = t;
        }
        if let Some(s) = self.number("sigma", None)? {
            if !(s > 0.0 && s <= 1.0) {
                return Err(Error::Config("sigma must lie in (0, 1]".into()));
            }
            o.sigma = s;
        }
        o.solver = self.linear_solver(o.solver)?;
        Ok(o)
    }

    /// Linear solver, keeping the base tolerance.
    pub fn linear_solver(&self, base: LinearSolver) -> Result<LinearSolver> {
        let tol = match base {
            LinearSolver::Pcg { tol, .. } | LinearSolver::Gmres { tol, .. } => tol,
        };
        let kind = self.raw("solver");
        let gmres_given = self.raw("gmres_restart").is_some() || self.raw("gmres_cap").is_some();
        let use_gmres = match kind {
            Some("gmres") => true,
            Some("pcg") => false,
            None => matches!(base, LinearSolver::Gmres { .. }) || gmres_given,
            Some(o) => return Err(Error::Config(format!("solver must be pcg or gmres (got '{o}')"))),
        };
        if !use_gmres {
            if gmres_given {
                return Err(Error::Config("GMRES settings given with --solver pcg".into()));
            }
            let max_iter = match base {
                LinearSolver::Pcg { max_iter, .. } => max_iter,
                _ => 100_000,
            };
            return Ok(LinearSolver::Pcg { tol, max_iter });
        }
        let mut settings = match base {
            LinearSolver::Gmres { settings, .. } => settings,
            _ => GmresSettings::STRICT,
        };
        settings.restart = self.count_or("gmres_restart", settings.restart)?;
        settings.max_iter = self.count_or("gmres_cap", settings.max_iter)?;
        if settings.restart == 0 || settings.max_iter == 0 {
            return Err(Error::Config("GMRES restart and cap must be positive".into()));
        }
        Ok(LinearSolver::Gmres { settings, tol })
    }
}

/// Parse `AxB` into two counts.
pub fn parse_pair(text: &str) -> Result<(usize, usize)> {
    let bad = || Error::Config(format!("expected NxM, got '{text}'"));
    let (a, b) = text.split_once('x').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

/// Split a grid description `kind:args` such as `ogrid:118x15` or
/// `rect:65x33`.
pub fn split_grid(spec: &str) -> Result<(&str, &str)> {
    spec.split_once(':')
        .ok_or_else(|| Error::Config(format!("grid must look like kind:size (got '{spec}')")))
}
