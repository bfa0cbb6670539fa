//! Verification reports and their byte-stable JSON, CSV and text forms.

use std::collections::BTreeMap;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::error::{Error, Result};

pub const SCHEMA: &str = "cliffgrav.report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentityRecord {
    pub identity_id: String,
    pub kind: String,
    pub max_residual: Option<f64>,
    pub pass: bool,
    pub points_evaluated: usize,
    pub reason: Option<String>,
    pub statement: String,
    pub status: Status,
    pub tolerance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioBlock {
    pub flat: bool,
    pub has_diffeomorphism: bool,
    pub name: String,
    pub notes: String,
    pub params: BTreeMap<String, f64>,
    pub points: Vec<[f64; 4]>,
    pub vacuum: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Environment {
    pub diagnostics: BTreeMap<String, Option<f64>>,
    pub fd_order: u32,
    pub fd_step: f64,
    pub graviton_mass: f64,
    pub scenario: ScenarioBlock,
    pub signs: BTreeMap<String, String>,
    pub version: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Summary {
    pub fail_count: usize,
    pub pass_count: usize,
    pub skip_count: usize,
}

impl Summary {
    pub fn from_rows(rows: &[IdentityRecord]) -> Self {
        let count = |s: Status| rows.iter().filter(|r| r.status == s).count();
        Self {
            fail_count: count(Status::Fail),
            pass_count: count(Status::Pass),
            skip_count: count(Status::Skipped),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub environment: Environment,
    pub identities: Vec<IdentityRecord>,
    pub schema: String,
    pub summary: Summary,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.summary.fail_count == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            other => Err(Error::Config(format!("unknown report format `{other}`"))),
        }
    }
}

/// Seventeen significant digits in scientific notation.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_string()
    }
}

/// Pretty printer with fixed float formatting.
struct StableFormatter(PrettyFormatter<'static>);

impl Formatter for StableFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(format_float(value).as_bytes())
    }
    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }
    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// JSON with sorted keys, fixed float format and a trailing newline.
pub fn to_json(r: &Report) -> Result<String> {
    let value = serde_json::to_value(r).map_err(|e| Error::Config(e.to_string()))?;
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, StableFormatter(PrettyFormatter::with_indent(b"  ")));
    value.serialize(&mut ser).map_err(|e| Error::Config(e.to_string()))?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("json is utf-8"))
}

pub fn from_json(s: &str) -> Result<Report> {
    serde_json::from_str(s).map_err(|e| Error::Config(format!("invalid report: {e}")))
}

fn opt_float(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

pub fn to_csv(r: &Report) -> Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Config(e.to_string());
    w.write_record(["identity_id", "status", "points_evaluated", "max_residual", "tolerance", "kind", "reason"])
        .map_err(csv_err)?;
    for row in &r.identities {
        w.write_record([
            row.identity_id.as_str(),
            row.status.as_str(),
            &row.points_evaluated.to_string(),
            &opt_float(row.max_residual),
            &format_float(row.tolerance),
            row.kind.as_str(),
            row.reason.as_deref().unwrap_or(""),
        ])
        .map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

pub fn to_text(r: &Report) -> String {
    let env = &r.environment;
    let mut out = String::new();
    out.push_str(&format!("scenario: {}\n", env.scenario.name));
    for (k, v) in &env.scenario.params {
        out.push_str(&format!("  {k} = {v}\n"));
    }
    out.push_str(&format!(
        "points: {}  fd: order {} step {:e}  mass: {}\n\n",
        env.scenario.points.len(),
        env.fd_order,
        env.fd_step,
        env.graviton_mass
    ));
    let width = r.identities.iter().map(|x| x.identity_id.len()).max().unwrap_or(0);
    for row in &r.identities {
        let residual = row.max_residual.map(|x| format!("{x:.3e}")).unwrap_or_else(|| "-".into());
        out.push_str(&format!(
            "{:<7} {:<width$}  {:>10}  tol {:.1e}",
            row.status.as_str().to_uppercase(),
            row.identity_id,
            residual,
            row.tolerance,
        ));
        if let Some(reason) = &row.reason {
            out.push_str(&format!("  ({reason})"));
        }
        out.push('\n');
    }
    out.push_str("\nsigns:\n");
    for (k, v) in &env.signs {
        out.push_str(&format!("  {k}: {v}\n"));
    }
    out.push_str("\ndiagnostics:\n");
    for (k, v) in &env.diagnostics {
        out.push_str(&format!("  {k}: {}\n", v.map(|x| format!("{x:.6e}")).unwrap_or_else(|| "-".into())));
    }
    out.push_str(&format!(
        "\nsummary: {} pass, {} fail, {} skipped\n",
        r.summary.pass_count, r.summary.fail_count, r.summary.skip_count
    ));
    out
}

pub fn render(r: &Report, f: Format) -> Result<String> {
    match f {
        Format::Json => to_json(r),
        Format::Csv => to_csv(r),
        Format::Text => Ok(to_text(r)),
    }
}
