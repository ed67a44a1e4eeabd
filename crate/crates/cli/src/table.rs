//! Column tables and their CSV/JSON forms.

use std::io::{Read, Write};

use qpair::{Error, Result};
use serde::{Deserialize, Serialize};

/// Named columns of equal length; the first column is the abscissa.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub data: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(x_name: &str, x: Vec<f64>) -> Self {
        Table {
            columns: vec![x_name.to_string()],
            data: vec![x],
        }
    }

    pub fn push(&mut self, name: impl Into<String>, values: Vec<f64>) {
        assert_eq!(values.len(), self.rows(), "column length mismatch");
        self.columns.push(name.into());
        self.data.push(values);
    }

    pub fn rows(&self) -> usize {
        self.data.first().map_or(0, Vec::len)
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns.iter().position(|c| c == name).map(|k| self.data[k].as_slice())
    }

    /// Floats are written in their shortest round-trip form, so reading
    /// the file back reproduces every value exactly.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for r in 0..self.rows() {
            w.write_record(self.data.iter().map(|c| c[r].to_string()))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let columns: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
        let mut data = vec![Vec::new(); columns.len()];
        for record in r.records() {
            let record = record?;
            for (k, field) in record.iter().enumerate() {
                let v = field
                    .parse::<f64>()
                    .map_err(|e| Error::Io(format!("bad number `{field}`: {e}")))?;
                data[k].push(v);
            }
        }
        Ok(Table { columns, data })
    }

    /// JSON has no NaN, so missing values become `null`.
    pub fn to_json(&self) -> Result<String> {
        let columns: serde_json::Map<String, serde_json::Value> = self
            .columns
            .iter()
            .zip(&self.data)
            .map(|(name, col)| {
                let values = col
                    .iter()
                    .map(|x| serde_json::Number::from_f64(*x).map_or(serde_json::Value::Null, serde_json::Value::Number))
                    .collect();
                (name.clone(), serde_json::Value::Array(values))
            })
            .collect();
        let doc = serde_json::json!({ "order": self.columns, "columns": columns });
        Ok(serde_json::to_string_pretty(&doc)?)
    }
}
