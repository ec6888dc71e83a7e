//! JSON report types and their serializer.
//!
//! Reports carry `schema_version` (currently 1) and write every float with 17
//! significant digits in exponent form, e.g. `1.8000000000000000e4`, so two
//! runs can be compared byte for byte.

use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use sha2::{Digest, Sha256};

use crate::arima::{ArimaOrder, ArimaParams};
use crate::diagnostics::{InformationCriteria, LjungBoxReport, ModelRanking};
use crate::forecast::ForecastResult;
use crate::series::{Correlogram, TrendStep};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Fields shared by every report.
#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub schema_version: u32,
    pub tool_version: &'static str,
    pub command: String,
    /// SHA-256 of the raw input file, hex encoded.
    pub input_digest: String,
}

impl Provenance {
    pub fn new(command: String, input: &[u8]) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool_version: TOOL_VERSION,
            command,
            input_digest: hex::encode(Sha256::digest(input)),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HistorySummary {
    pub start_label: i32,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CorrelogramReport {
    #[serde(flatten)]
    pub provenance: Provenance,
    pub history: HistorySummary,
    pub max_lag: usize,
    pub acf: Correlogram,
    pub pacf: Correlogram,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    #[serde(flatten)]
    pub provenance: Provenance,
    pub order: ArimaOrder,
    pub include_constant: bool,
    pub converged: bool,
    pub iterations: usize,
    pub params_summary: ArimaParams,
    pub log_likelihood: f64,
    pub n_effective: usize,
    pub diagnostics: Option<LjungBoxReport>,
    /// Why `diagnostics` is absent, when it is.
    pub diagnostics_note: Option<String>,
    pub criteria: Option<InformationCriteria>,
    pub history: HistorySummary,
    pub trend: Vec<TrendStep>,
    pub forecast: Option<ForecastResult>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SelectReport {
    #[serde(flatten)]
    pub provenance: Provenance,
    pub max_order: ArimaOrder,
    pub include_constant: bool,
    pub ranking: ModelRanking,
    pub warnings: Vec<String>,
}

/// Pretty-printing formatter that writes floats as `{:.16e}`.
struct FixedPrecision<'a>(PrettyFormatter<'a>);

impl Formatter for FixedPrecision<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_array(writer)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object(writer)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object_value(writer)
    }
}

/// Serializes `value` as pretty JSON with fixed 17-significant-digit floats
/// and a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> serde_json::Result<Vec<u8>> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedPrecision(PrettyFormatter::new()));
    value.serialize(&mut ser)?;
    out.push(b'\n');
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_carry_seventeen_digits() {
        #[derive(Serialize)]
        struct Sample {
            a: f64,
            b: Vec<f64>,
            c: Option<f64>,
        }
        let json = to_json(&Sample {
            a: 18000.0,
            b: vec![0.1, -0.25],
            c: None,
        })
        .unwrap();
        let text = String::from_utf8(json).unwrap();
        assert!(text.contains("\"a\": 1.8000000000000000e4"), "{text}");
        assert!(text.contains("1.0000000000000001e-1"), "{text}");
        assert!(text.contains("-2.5000000000000000e-1"), "{text}");
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["a"].as_f64(), Some(18000.0));
        assert_eq!(parsed["b"][0].as_f64(), Some(0.1));
        assert!(parsed["c"].is_null());
    }

    #[test]
    fn digest_is_sha256() {
        let p = Provenance::new("x".into(), b"abc");
        assert_eq!(
            p.input_digest,
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
