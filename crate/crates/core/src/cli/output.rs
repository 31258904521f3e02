// SPDX-License-Identifier: Apache-2.0

//! Result documents and their JSON/CSV renderings.
//!
//! Floats are printed as `{:.16e}` (17 significant digits) so that every
//! value reads back to the same double; non-finite values become `null`
//! in JSON and an empty field in CSV.

use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Float(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Null,
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Float(x)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl From<usize> for Value {
    fn from(n: usize) -> Self {
        Value::Int(n as i64)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.to_string())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Text(s)
    }
}

impl<T: Into<Value>> From<Option<T>> for Value {
    fn from(v: Option<T>) -> Self {
        v.map_or(Value::Null, Into::into)
    }
}

pub fn format_float(x: f64) -> Option<String> {
    x.is_finite().then(|| format!("{x:.16e}"))
}

impl Value {
    fn json(&self) -> String {
        match self {
            Value::Float(x) => format_float(*x).unwrap_or_else(|| "null".into()),
            Value::Int(n) => n.to_string(),
            Value::Bool(b) => b.to_string(),
            Value::Text(s) => serde_json::to_string(s).expect("strings always serialize"),
            Value::Null => "null".into(),
        }
    }

    fn csv(&self) -> String {
        match self {
            Value::Float(x) => format_float(*x).unwrap_or_default(),
            Value::Int(n) => n.to_string(),
            Value::Bool(b) => b.to_string(),
            Value::Text(s) => s.clone(),
            Value::Null => String::new(),
        }
    }
}

/// Ordered field list; insertion order is output order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record(pub Vec<(String, Value)>);

impl Record {
    pub fn new() -> Self {
        Record(Vec::new())
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.0.push((key.to_string(), value.into()));
        self
    }

    pub fn push(&mut self, key: &str, value: impl Into<Value>) {
        self.0.push((key.to_string(), value.into()));
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    fn json(&self) -> String {
        let fields: Vec<String> = self
            .0
            .iter()
            .map(|(k, v)| format!("{}:{}", serde_json::to_string(k).expect("key"), v.json()))
            .collect();
        format!("{{{}}}", fields.join(","))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub inputs: Record,
    pub results: Vec<Record>,
}

impl Report {
    /// `{"command":..,"inputs":{..},"results":[{..},..]}` with one result per line.
    pub fn to_json(&self) -> String {
        let results: Vec<String> = self.results.iter().map(|r| format!("  {}", r.json())).collect();
        format!(
            "{{\"command\":{},\n\"inputs\":{},\n\"results\":[\n{}\n]}}\n",
            serde_json::to_string(&self.command).expect("command"),
            self.inputs.json(),
            results.join(",\n")
        )
    }

    /// Header from the first record's keys, one row per record.
    pub fn to_csv(&self) -> Result<String> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        if let Some(first) = self.results.first() {
            writer.write_record(first.0.iter().map(|(k, _)| k.as_str()))?;
        }
        for record in &self.results {
            writer.write_record(record.0.iter().map(|(_, v)| v.csv()))?;
        }
        let bytes = writer.into_inner().map_err(|e| crate::error::Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
    }
}
