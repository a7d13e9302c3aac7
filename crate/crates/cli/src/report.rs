//! Report envelope, real-number rendering and output formats.

use std::path::Path;

use nilseq_core::numeric::{ExactReal, PrecisionPolicy};
use nilseq_core::{Error, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::certificate::Certificate;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    /// Arguments after the program name, minus `--workers` and `--timing`.
    pub command: Vec<String>,
    pub version: String,
    /// SHA-256 over the echoed command and every input file read.
    pub inputs_digest: String,
    pub precision: PrecisionPolicy,
    pub seed: u64,
    pub results: Value,
    pub certificates: Vec<Certificate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

/// `(decimal rendering, dyadic enclosure, precision bits)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RealRepr {
    pub decimal: String,
    pub enclosure: [String; 2],
    pub bits: u32,
}

impl RealRepr {
    pub fn new(x: &ExactReal, policy: &PrecisionPolicy) -> Result<Self> {
        let bits = policy.start_bits;
        let iv = x.enclosure_within(bits, policy.max_bits)?;
        Ok(RealRepr {
            decimal: x.to_decimal(20),
            enclosure: [iv.lo.to_string(), iv.hi.to_string()],
            bits,
        })
    }
}

pub fn real(x: &ExactReal, policy: &PrecisionPolicy) -> Result<Value> {
    to_value(&RealRepr::new(x, policy)?)
}

pub fn to_value<T: Serialize>(x: &T) -> Result<Value> {
    serde_json::to_value(x).map_err(|e| Error::Invalid(format!("serialization failed: {e}")))
}

/// A table of numbers for CSV output.
#[derive(Debug, Clone, Default)]
pub struct Series {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Series {
    pub fn new(header: &[&str]) -> Self {
        Series {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Invalid(format!("csv: {e}"));
        w.write_record(&self.header).map_err(io)?;
        for r in &self.rows {
            w.write_record(r).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Invalid(format!("csv: {e}")))?;
        String::from_utf8(bytes).map_err(|e| Error::Invalid(e.to_string()))
    }
}

/// What a subcommand hands back to the runner.
#[derive(Debug, Default)]
pub struct Output {
    pub results: Value,
    pub certificates: Vec<Certificate>,
    pub series: Option<Series>,
    /// Set by replay when a certificate does not check.
    pub failed: bool,
}

impl Output {
    pub fn new(results: Value) -> Self {
        Output {
            results,
            ..Default::default()
        }
    }

    pub fn with_cert(mut self, c: Certificate) -> Self {
        self.certificates.push(c);
        self
    }

    pub fn with_series(mut self, s: Series) -> Self {
        self.series = Some(s);
        self
    }
}

pub fn digest(command: &[String], files: &[(String, Vec<u8>)]) -> String {
    let mut h = Sha256::new();
    for a in command {
        h.update(a.as_bytes());
        h.update([0u8]);
    }
    for (name, bytes) in files {
        h.update(name.as_bytes());
        h.update([0u8]);
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(bytes);
    }
    hex::encode(h.finalize())
}

pub fn read_report(path: &Path) -> Result<(Report, Vec<u8>)> {
    let bytes = std::fs::read(path).map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
    let rep = serde_json::from_slice(&bytes)
        .map_err(|e| Error::Invalid(format!("{} is not a report: {e}", path.display())))?;
    Ok((rep, bytes))
}
