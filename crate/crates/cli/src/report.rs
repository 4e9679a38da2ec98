//! Report envelope and serialization.
//!
//! Every command emits exactly one JSON document with the same envelope:
//! inputs, outputs, and one verdict per invariant the command checks. The
//! documents are deterministic — no timestamps, map keys sorted, and every
//! float written with 17 significant digits — so identical configurations
//! produce byte-identical reports. The shape is pinned by
//! `schema/report.schema.json`.

use serde::Serialize;
use std::io::{self, Write};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Verdict {
    pub fn new(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            pass,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub seed: Option<u64>,
    pub params: serde_json::Value,
    pub results: serde_json::Value,
    pub verdicts: Vec<Verdict>,
    pub pass: bool,
}

impl Report {
    pub fn new(
        command: &str,
        seed: Option<u64>,
        params: impl Serialize,
        results: impl Serialize,
        verdicts: Vec<Verdict>,
    ) -> Result<Self, serde_json::Error> {
        let pass = verdicts.iter().all(|v| v.pass);
        Ok(Self {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            seed,
            params: serde_json::to_value(params)?,
            results: serde_json::to_value(results)?,
            verdicts,
            pass,
        })
    }
}

/// JSON formatter that writes every float in scientific notation with 17
/// significant digits.
struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Serializes a report (or any value) with the 17-digit float convention.
pub fn to_json(value: &impl Serialize) -> Result<String, serde_json::Error> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SciFormatter);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(out).expect("serde_json emits UTF-8"))
}
