//! Verification rows and their JSONL / CSV encodings.

use std::collections::BTreeMap;
use std::io::{self, Write};

use serde::Serialize;

/// Wall-clock milliseconds spent per route.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Elapsed {
    pub predict: f64,
    pub fast: f64,
    pub oracle: f64,
}

/// One verification row. Residues are decimal strings in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CongruenceRecord {
    pub theorem: String,
    pub p: u64,
    pub a: u32,
    pub params: BTreeMap<String, String>,
    pub target: String,
    pub predicted: Option<String>,
    pub fast: Option<String>,
    pub oracle: Option<String>,
    pub match_pf: Option<bool>,
    pub match_po: Option<bool>,
    pub applicable: bool,
    pub reason: Option<String>,
    /// Only filled when timings are requested, so default streams are
    /// byte-for-byte reproducible.
    pub elapsed_ms: Option<Elapsed>,
}

impl CongruenceRecord {
    pub fn mismatch(&self) -> bool {
        self.match_pf == Some(false) || self.match_po == Some(false)
    }

    pub fn params_label(&self) -> String {
        self.params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(",")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Jsonl,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "jsonl" => Ok(Format::Jsonl),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format {other:?} (expected jsonl or csv)")),
        }
    }
}

pub const CSV_HEADER: [&str; 15] = [
    "theorem",
    "p",
    "a",
    "params",
    "target",
    "predicted",
    "fast",
    "oracle",
    "match_pf",
    "match_po",
    "applicable",
    "reason",
    "elapsed_predict_ms",
    "elapsed_fast_ms",
    "elapsed_oracle_ms",
];

/// Serialized sink for records.
pub struct RecordWriter<W: Write> {
    inner: Sink<W>,
}

enum Sink<W: Write> {
    Jsonl(W),
    Csv(csv::Writer<W>),
}

impl<W: Write> RecordWriter<W> {
    pub fn new(out: W, format: Format) -> io::Result<Self> {
        let inner = match format {
            Format::Jsonl => Sink::Jsonl(out),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(CSV_HEADER)?;
                Sink::Csv(w)
            }
        };
        Ok(Self { inner })
    }

    pub fn write(&mut self, rec: &CongruenceRecord) -> io::Result<()> {
        match &mut self.inner {
            Sink::Jsonl(w) => {
                serde_json::to_writer(&mut *w, rec)?;
                w.write_all(b"\n")
            }
            Sink::Csv(w) => {
                let opt = |x: &Option<String>| x.clone().unwrap_or_default();
                let flag = |x: Option<bool>| x.map(|b| b.to_string()).unwrap_or_default();
                let ms = |f: fn(&Elapsed) -> f64| {
                    rec.elapsed_ms.as_ref().map(|e| f(e).to_string()).unwrap_or_default()
                };
                w.write_record([
                    rec.theorem.clone(),
                    rec.p.to_string(),
                    rec.a.to_string(),
                    rec.params_label(),
                    rec.target.clone(),
                    opt(&rec.predicted),
                    opt(&rec.fast),
                    opt(&rec.oracle),
                    flag(rec.match_pf),
                    flag(rec.match_po),
                    rec.applicable.to_string(),
                    opt(&rec.reason),
                    ms(|e| e.predict),
                    ms(|e| e.fast),
                    ms(|e| e.oracle),
                ])?;
                Ok(())
            }
        }
    }

    pub fn finish(self) -> io::Result<()> {
        match self.inner {
            Sink::Jsonl(mut w) => w.flush(),
            Sink::Csv(mut w) => w.flush(),
        }
    }
}
