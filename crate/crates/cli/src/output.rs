use clap::ValueEnum;
use graphdim_core::EstimateCI;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Numeric table with a fixed header.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

pub const ESTIMATE_HEADER: [&str; 4] = ["k", "mean", "stderr", "n"];
pub const VALUE_HEADER: [&str; 3] = ["k", "value", "stderr"];

impl Table {
    pub fn estimates(rows: impl IntoIterator<Item = (f64, EstimateCI)>) -> Table {
        Table {
            header: ESTIMATE_HEADER.to_vec(),
            rows: rows
                .into_iter()
                .map(|(k, e)| vec![k, e.mean, e.std_error, e.n_samples as f64])
                .collect(),
        }
    }

    pub fn values(rows: impl IntoIterator<Item = (f64, f64, f64)>) -> Table {
        Table {
            header: VALUE_HEADER.to_vec(),
            rows: rows.into_iter().map(|(k, v, s)| vec![k, v, s]).collect(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Array of row objects keyed by column; non-finite cells become `null`.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .header
                        .iter()
                        .zip(row)
                        .map(|(h, &x)| (h.to_string(), number(x)))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => pretty(&self.to_json()),
        }
    }

    /// Parse a CSV with a header row.
    pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>), String> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (_, head) = lines.next().ok_or("empty CSV")?;
        let header: Vec<String> = head.split(',').map(|h| h.trim().to_string()).collect();
        let mut rows = Vec::new();
        for (i, line) in lines {
            let row = line
                .split(',')
                .map(|c| {
                    c.trim()
                        .parse::<f64>()
                        .map_err(|e| format!("line {}: bad number {c:?}: {e}", i + 1))
                })
                .collect::<Result<Vec<f64>, String>>()?;
            if row.len() != header.len() {
                return Err(format!(
                    "line {}: {} cells, header has {}",
                    i + 1,
                    row.len(),
                    header.len()
                ));
            }
            rows.push(row);
        }
        Ok((header, rows))
    }
}

pub fn number(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}
