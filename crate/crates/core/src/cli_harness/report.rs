//! Check records, reports and their JSON and CSV encodings.
//!
//! Every floating-point number written by the harness, in JSON or CSV, is
//! printed in scientific notation with 17 significant digits, so a value
//! read back from a report is bit-identical to the one computed.

use std::collections::BTreeMap;
use std::io;
use std::path::Path;

use serde::ser::Serialize;
use serde::Deserialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::error::Result;
use crate::numerics::fmt17;
use crate::wave_space::GridSettings;

/// Pass rule of a check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// `|value − reference| ≤ tolerance`.
    Within,
    /// `value ≥ reference − tolerance`.
    AtLeast,
    /// `value ≤ reference + tolerance`.
    AtMost,
}

impl Rule {
    /// Evaluates the rule. Non-finite values never pass.
    pub fn holds(self, value: f64, reference: f64, tolerance: f64) -> bool {
        if !value.is_finite() {
            return false;
        }
        match self {
            Self::Within => (value - reference).abs() <= tolerance,
            Self::AtLeast => value >= reference - tolerance,
            Self::AtMost => value <= reference + tolerance,
        }
    }
}

/// One named check.
#[derive(Clone, Debug, PartialEq, serde::Serialize, Deserialize)]
pub struct CheckRecord {
    /// Check identifier.
    pub check_name: String,
    /// Measured value.
    pub value: f64,
    /// Reference value.
    pub reference_value: f64,
    /// Tolerance applied by the rule.
    pub tolerance: f64,
    /// Comparison rule.
    pub rule: Rule,
    /// Outcome.
    pub pass: bool,
}

impl CheckRecord {
    /// Builds a record and evaluates its rule.
    pub fn new(name: impl Into<String>, value: f64, reference: f64, tolerance: f64, rule: Rule) -> Self {
        Self {
            check_name: name.into(),
            value,
            reference_value: reference,
            tolerance,
            rule,
            pass: rule.holds(value, reference, tolerance),
        }
    }
}

/// A named number reported for information only.
#[derive(Clone, Debug, PartialEq, serde::Serialize, Deserialize)]
pub struct Diagnostic {
    /// Identifier.
    pub name: String,
    /// Value.
    pub value: f64,
}

/// Reproducibility block of a report.
#[derive(Clone, Debug, PartialEq, serde::Serialize, Deserialize)]
pub struct Environment {
    /// Grid used by the suite, if it samples fields.
    pub grid: Option<GridSettings>,
    /// RNG seed.
    pub seed: u64,
    /// Crate version.
    pub version: String,
}

impl Environment {
    /// Environment with the running crate version.
    pub fn new(grid: Option<GridSettings>, seed: u64) -> Self {
        Self {
            grid,
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

/// Result of one verification suite.
#[derive(Clone, Debug, PartialEq, serde::Serialize, Deserialize)]
pub struct CheckReport {
    /// Suite name.
    pub suite: String,
    /// Creation time (RFC 3339, UTC). The only field that varies between
    /// identical runs.
    pub timestamp: String,
    /// Grid, seed and version.
    pub environment: Environment,
    /// Conjunction of all check outcomes.
    pub pass: bool,
    /// Checks in execution order.
    pub checks: Vec<CheckRecord>,
    /// Informational values.
    pub diagnostics: Vec<Diagnostic>,
    /// Structured per-suite data (tables, per-state reports).
    pub details: BTreeMap<String, serde_json::Value>,
}

impl CheckReport {
    /// Looks up a check by name.
    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.check_name == name)
    }

    /// Looks up a diagnostic by name.
    pub fn diagnostic(&self, name: &str) -> Option<f64> {
        self.diagnostics.iter().find(|d| d.name == name).map(|d| d.value)
    }

    /// Names of the failed checks.
    pub fn failures(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.check_name.as_str())
            .collect()
    }

    /// The report with the timestamp blanked, for golden comparisons.
    pub fn without_timestamp(&self) -> Self {
        Self {
            timestamp: String::new(),
            ..self.clone()
        }
    }
}

/// Current time as an RFC 3339 UTC string with second resolution.
pub fn timestamp_now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

/// Pretty JSON formatter that prints floats with 17 significant digits.
struct Fmt17Formatter<'a>(PrettyFormatter<'a>);

impl Formatter for Fmt17Formatter<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(fmt17(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        w.write_all(fmt17(f64::from(value)).as_bytes())
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Serializes a value as pretty JSON with 17-significant-digit floats.
/// Non-finite floats become `null`.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Fmt17Formatter(PrettyFormatter::new()));
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

/// Writes [`to_json_string`] output to a file.
pub fn write_json<T: Serialize + ?Sized>(value: &T, path: &Path) -> Result<()> {
    std::fs::write(path, to_json_string(value)?)?;
    Ok(())
}

/// Converts a serializable value into a JSON tree for the `details` map.
pub fn to_value<T: Serialize + ?Sized>(value: &T) -> Result<serde_json::Value> {
    Ok(serde_json::to_value(value)?)
}
