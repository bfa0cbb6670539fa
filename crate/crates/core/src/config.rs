//! Flat `key = value` configuration files and the command-line overlay.
//!
//! Keys mirror the `verify` flags:
//!
//! ```text
//! scenario = schwarzschild
//! param.mass = 1
//! n_points = 8            # or: points = pts.csv
//! fd_step = 1e-3
//! fd_order = 4
//! mass = 0.1
//! tol.maxwell.conservation = 2e-3
//! out = report.json
//! format = json
//! ```

use std::collections::BTreeMap;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::field::FdOrder;
use crate::report::Format;
use crate::suite::{PointSource, SuiteConfig};

#[derive(Clone, Debug, PartialEq)]
pub struct RunOptions {
    pub suite: SuiteConfig,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            suite: SuiteConfig::default(),
            out: None,
            format: Format::Json,
        }
    }
}

/// Overrides gathered from the command line; `None` leaves the value alone.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub scenario: Option<String>,
    pub params: Vec<(String, f64)>,
    pub points: Option<PathBuf>,
    pub n_points: Option<usize>,
    pub fd_step: Option<f64>,
    pub fd_order: Option<u32>,
    pub mass: Option<f64>,
    pub tolerances: Vec<(String, f64)>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

fn number(key: &str, raw: &str) -> Result<f64> {
    raw.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::Config(format!("`{key}` expects a number, got `{raw}`")))
}

/// Splits `name=value` as used by `--param` and `--tol`.
pub fn parse_assignment(s: &str) -> Result<(String, f64)> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("expected name=value, got `{s}`")))?;
    let k = k.trim();
    if k.is_empty() {
        return Err(Error::Config(format!("empty name in `{s}`")));
    }
    Ok((k.to_string(), number(k, v)?))
}

/// Parses a configuration file body into ordered key/value pairs.
pub fn parse_file(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key = value", n + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

impl RunOptions {
    pub fn apply_entries(&mut self, entries: &[(String, String)]) -> Result<()> {
        for (k, v) in entries {
            match k.as_str() {
                "scenario" => self.suite.scenario = v.clone(),
                "points" => self.suite.points = PointSource::Csv(PathBuf::from(v)),
                "n_points" => {
                    let n = v
                        .parse::<usize>()
                        .map_err(|_| Error::Config(format!("`n_points` expects an integer, got `{v}`")))?;
                    self.suite.points = PointSource::Builtin(n);
                }
                "fd_step" => self.suite.fd_step = number(k, v)?,
                "fd_order" => self.suite.fd_order = parse_order(v)?,
                "mass" => self.suite.mass = number(k, v)?,
                "out" => self.out = Some(PathBuf::from(v)),
                "format" => self.format = v.parse()?,
                _ => {
                    if let Some(name) = k.strip_prefix("param.") {
                        self.suite.params.insert(name.to_string(), number(k, v)?);
                    } else if let Some(id) = k.strip_prefix("tol.") {
                        self.suite.tolerances.insert(id.to_string(), number(k, v)?);
                    } else {
                        return Err(Error::Config(format!("unknown configuration key `{k}`")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn apply_overrides(&mut self, o: &Overrides) -> Result<()> {
        if let Some(s) = &o.scenario {
            if *s != self.suite.scenario {
                self.suite.params = BTreeMap::new();
            }
            self.suite.scenario = s.clone();
        }
        for (k, v) in &o.params {
            self.suite.params.insert(k.clone(), *v);
        }
        if o.points.is_some() && o.n_points.is_some() {
            return Err(Error::Config("--points and --n-points are mutually exclusive".into()));
        }
        if let Some(p) = &o.points {
            self.suite.points = PointSource::Csv(p.clone());
        }
        if let Some(n) = o.n_points {
            self.suite.points = PointSource::Builtin(n);
        }
        if let Some(h) = o.fd_step {
            self.suite.fd_step = h;
        }
        if let Some(k) = o.fd_order {
            self.suite.fd_order = FdOrder::from_int(k)?;
        }
        if let Some(m) = o.mass {
            self.suite.mass = m;
        }
        for (k, v) in &o.tolerances {
            self.suite.tolerances.insert(k.clone(), *v);
        }
        if let Some(p) = &o.out {
            self.out = Some(p.clone());
        }
        if let Some(f) = o.format {
            self.format = f;
        }
        self.suite.validate()
    }
}

fn parse_order(v: &str) -> Result<FdOrder> {
    let k = v
        .parse::<u32>()
        .map_err(|_| Error::Config(format!("`fd_order` expects 2 or 4, got `{v}`")))?;
    FdOrder::from_int(k)
}

/// Builds options from an optional config file body plus overrides.
pub fn resolve(file: Option<&str>, o: &Overrides) -> Result<RunOptions> {
    let mut opts = RunOptions::default();
    if let Some(text) = file {
        opts.apply_entries(&parse_file(text)?)?;
    }
    opts.apply_overrides(o)?;
    Ok(opts)
}

/// Process exit status for an error: 2 for configuration problems, 3 for
/// scenario and domain problems.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::InvalidScheme(_) | Error::Io(_) => 2,
        _ => 3,
    }
}
