use std::io::{self, Write};

use serde_json::Value;

use spinnet::OutputFormat;

/// Result of a subcommand in both output shapes.
#[derive(Debug)]
pub struct Rendered {
    pub json: Value,
    /// `# key: value` lines ahead of the CSV header.
    pub meta: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// First failing check, if any.
    pub failure: Option<String>,
}

impl Rendered {
    pub fn new(json: Value, header: &[&str]) -> Self {
        Rendered {
            json,
            meta: Vec::new(),
            header: header.iter().map(|h| (*h).to_owned()).collect(),
            rows: Vec::new(),
            failure: None,
        }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.meta.push((key.to_owned(), value.to_string()));
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }
}

pub fn emit(r: &Rendered, format: OutputFormat, out: &mut impl Write) -> io::Result<()> {
    match format {
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, &r.json)?;
            writeln!(out)
        }
        OutputFormat::Csv => {
            for (k, v) in &r.meta {
                writeln!(out, "# {k}: {v}")?;
            }
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(&r.header)?;
            for row in &r.rows {
                w.write_record(row)?;
            }
            w.flush()
        }
    }
}

/// Shortest round-trip representation; `NaN`/infinities spelled out.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:?}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}
