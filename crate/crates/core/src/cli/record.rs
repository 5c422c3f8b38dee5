use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::estimate::Estimate;

pub const CSV_HEADER: [&str; 8] = [
    "quantity", "lambda", "s", "t", "method", "value", "err", "diag",
];

/// One output row: a computed quantity at one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub quantity: String,
    #[serde(with = "nan_as_null")]
    pub lambda: f64,
    #[serde(with = "nan_as_null")]
    pub s: f64,
    #[serde(with = "nan_as_null")]
    pub t: f64,
    pub method: String,
    #[serde(with = "nan_as_null")]
    pub value: f64,
    pub err: Option<f64>,
    /// `key=value` pairs separated by `;`.
    pub diag: String,
}

/// JSON has no NaN; map it to `null` and back.
mod nan_as_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, ser: S) -> Result<S::Ok, S::Error> {
        if v.is_nan() {
            ser.serialize_none()
        } else {
            ser.serialize_f64(*v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(de)?.unwrap_or(f64::NAN))
    }
}

pub fn format_number(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

pub fn format_diag(diag: &BTreeMap<String, f64>) -> String {
    diag.iter()
        .map(|(k, v)| format!("{k}={}", format_number(*v)))
        .collect::<Vec<_>>()
        .join(";")
}

impl OutputRecord {
    pub fn from_estimate(quantity: &str, (lambda, s, t): (f64, f64, f64), est: &Estimate) -> Self {
        OutputRecord {
            quantity: quantity.to_string(),
            lambda,
            s,
            t,
            method: est.method.as_str().to_string(),
            value: est.value,
            err: est.error_bound,
            diag: format_diag(&est.diagnostics),
        }
    }

    pub fn push_diag(&mut self, entry: &str) {
        if !self.diag.is_empty() {
            self.diag.push(';');
        }
        self.diag.push_str(entry);
    }

    fn csv_fields(&self) -> [String; 8] {
        [
            self.quantity.clone(),
            format_number(self.lambda),
            format_number(self.s),
            format_number(self.t),
            self.method.clone(),
            format_number(self.value),
            self.err.map(format_number).unwrap_or_default(),
            self.diag.clone(),
        ]
    }
}

/// Writes records as CSV (with header) or as JSON lines.
pub struct RecordWriter<W: Write> {
    json: bool,
    csv: Option<csv::Writer<W>>,
    raw: Option<W>,
}

impl<W: Write> RecordWriter<W> {
    pub fn new(out: W, json: bool) -> csv::Result<Self> {
        if json {
            return Ok(RecordWriter {
                json,
                csv: None,
                raw: Some(out),
            });
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_HEADER)?;
        Ok(RecordWriter {
            json,
            csv: Some(w),
            raw: None,
        })
    }

    pub fn write(&mut self, rec: &OutputRecord) -> std::io::Result<()> {
        if self.json {
            let out = self.raw.as_mut().expect("json sink");
            serde_json::to_writer(&mut *out, rec)?;
            out.write_all(b"\n")
        } else {
            let w = self.csv.as_mut().expect("csv sink");
            w.write_record(rec.csv_fields())
                .map_err(std::io::Error::other)
        }
    }

    pub fn finish(mut self) -> std::io::Result<()> {
        if let Some(w) = self.csv.as_mut() {
            w.flush()?;
        }
        if let Some(w) = self.raw.as_mut() {
            w.flush()?;
        }
        Ok(())
    }
}

/// Parses CSV produced by [`RecordWriter`].
pub fn read_csv(input: &str) -> csv::Result<Vec<OutputRecord>> {
    csv::Reader::from_reader(input.as_bytes())
        .deserialize()
        .collect()
}
