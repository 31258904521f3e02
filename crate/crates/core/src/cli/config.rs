// SPDX-License-Identifier: Apache-2.0

//! Flat `key=value` run configuration.
//!
//! Pairs are separated by newlines or whitespace; `#` starts a comment.
//! Keys are case-sensitive.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Derive,
    Propagate,
    Phases,
    Gate,
    Echo,
    Synth,
    Sweep,
    Verify,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Derive,
        Command::Propagate,
        Command::Phases,
        Command::Gate,
        Command::Echo,
        Command::Synth,
        Command::Sweep,
        Command::Verify,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Derive => "derive",
            Command::Propagate => "propagate",
            Command::Phases => "phases",
            Command::Gate => "gate",
            Command::Echo => "echo",
            Command::Synth => "synth",
            Command::Sweep => "sweep",
            Command::Verify => "verify",
        }
    }

    /// (required, optional) parameter keys.
    pub fn keys(self) -> (&'static [&'static str], &'static [&'static str]) {
        const DRIVE: &[&str] = &["omega_par", "omega_perp", "omegaR"];
        const PAIR: &[&str] = &["omega01", "omega02", "omega1", "omegaR", "J"];
        match self {
            Command::Derive => (DRIVE, &[]),
            Command::Propagate => (DRIVE, &["t", "steps"]),
            Command::Phases => (DRIVE, &["steps"]),
            Command::Gate => (PAIR, &["tau", "doubled"]),
            Command::Echo => (PAIR, &["tau", "steps"]),
            Command::Synth => (&["gamma1", "gamma2", "omega1", "omegaR"], &["doubled", "J"]),
            Command::Sweep => (&[], SWEEP_KEYS),
            Command::Verify => (&[], &["steps"]),
        }
    }
}

const SWEEP_KEYS: &[&str] = &[
    "omega01", "omega01_min", "omega01_max", "omega01_n",
    "omega02", "omega02_min", "omega02_max", "omega02_n",
    "omega1", "omega1_min", "omega1_max", "omega1_n",
    "omegaR", "omegaR_min", "omegaR_max", "omegaR_n",
    "J", "J_min", "J_max", "J_n",
    "doubled", "oracle", "steps",
];

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown command {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl OutputFormat {
    pub fn name(self) -> &'static str {
        match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamValue {
    Number(f64),
    Bool(bool),
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // Debug formatting is the shortest string that parses back exactly.
            ParamValue::Number(x) => write!(f, "{x:?}"),
            ParamValue::Bool(b) => write!(f, "{b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub parameters: BTreeMap<String, ParamValue>,
    pub output_path: Option<PathBuf>,
    pub output_format: OutputFormat,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig { command, parameters: BTreeMap::new(), output_path: None, output_format: OutputFormat::Json }
    }

    pub fn number(&self, key: &str) -> Option<f64> {
        match self.parameters.get(key) {
            Some(ParamValue::Number(x)) => Some(*x),
            _ => None,
        }
    }

    pub fn require(&self, key: &str) -> Result<f64> {
        self.number(key).ok_or_else(|| Error::contract(format!("missing numeric parameter {key}")))
    }

    pub fn flag(&self, key: &str, default: bool) -> bool {
        match self.parameters.get(key) {
            Some(ParamValue::Bool(b)) => *b,
            _ => default,
        }
    }

    /// A non-negative integer parameter.
    pub fn count(&self, key: &str, default: usize) -> Result<usize> {
        match self.number(key) {
            None => Ok(default),
            Some(x) if x >= 0.0 && x.fract() == 0.0 && x <= 1e15 => Ok(x as usize),
            Some(x) => Err(Error::contract(format!("{key} must be a non-negative integer, got {x}"))),
        }
    }
}

const BOOL_KEYS: &[&str] = &["doubled", "oracle"];
const INTEGER_KEYS: &[&str] = &["steps", "omega01_n", "omega02_n", "omega1_n", "omegaR_n", "J_n"];

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut command: Option<(Command, usize)> = None;
    let mut raw: Vec<(String, String, usize)> = Vec::new();
    let mut output_path = None;
    let mut output_format = None;
    for (index, line) in text.lines().enumerate() {
        let number = index + 1;
        let content = line.split('#').next().unwrap_or("");
        for token in content.split_whitespace() {
            let (key, value) = token
                .split_once('=')
                .ok_or_else(|| parse_error(number, format!("expected key=value, got {token:?}")))?;
            if key.is_empty() || value.is_empty() {
                return Err(parse_error(number, format!("empty key or value in {token:?}")));
            }
            let seen = raw.iter().any(|(k, _, _)| k == key)
                || (key == "command" && command.is_some())
                || (key == "output" && output_path.is_some())
                || (key == "format" && output_format.is_some());
            if seen {
                return Err(parse_error(number, format!("duplicate key {key}")));
            }
            match key {
                "command" => command = Some((value.parse().map_err(|e: String| parse_error(number, e))?, number)),
                "output" => output_path = Some(PathBuf::from(value)),
                "format" => {
                    output_format = Some(match value {
                        "json" => OutputFormat::Json,
                        "csv" => OutputFormat::Csv,
                        _ => return Err(parse_error(number, format!("unknown format {value:?}"))),
                    })
                }
                _ => raw.push((key.to_string(), value.to_string(), number)),
            }
        }
    }
    let (command, command_line) = command.ok_or_else(|| parse_error(0, "missing key command"))?;
    let (required, optional) = command.keys();
    let mut parameters = BTreeMap::new();
    for (key, value, line) in raw {
        if !required.contains(&key.as_str()) && !optional.contains(&key.as_str()) {
            return Err(parse_error(line, format!("unknown key {key} for command {command}")));
        }
        let parsed = if BOOL_KEYS.contains(&key.as_str()) {
            match value.as_str() {
                "true" => ParamValue::Bool(true),
                "false" => ParamValue::Bool(false),
                _ => return Err(parse_error(line, format!("{key} must be true or false, got {value:?}"))),
            }
        } else {
            let x: f64 = value.parse().map_err(|_| parse_error(line, format!("{key}: not a number: {value:?}")))?;
            if !x.is_finite() {
                return Err(parse_error(line, format!("{key} must be finite")));
            }
            if INTEGER_KEYS.contains(&key.as_str()) && !(x >= 0.0 && x.fract() == 0.0) {
                return Err(parse_error(line, format!("{key} must be a non-negative integer, got {value}")));
            }
            ParamValue::Number(x)
        };
        parameters.insert(key, parsed);
    }
    for key in required {
        if !parameters.contains_key(*key) {
            return Err(parse_error(command_line, format!("command {command} requires key {key}")));
        }
    }
    Ok(RunConfig { command, parameters, output_path, output_format: output_format.unwrap_or_default() })
}

/// Renders a configuration that [`parse_config`] reads back unchanged.
pub fn serialize(config: &RunConfig) -> String {
    let mut out = format!("command={}\n", config.command);
    for (key, value) in &config.parameters {
        out.push_str(&format!("{key}={value}\n"));
    }
    if let Some(path) = &config.output_path {
        out.push_str(&format!("output={}\n", path.display()));
    }
    out.push_str(&format!("format={}\n", config.output_format.name()));
    out
}
