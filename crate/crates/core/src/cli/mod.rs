// SPDX-License-Identifier: Apache-2.0

//! Command-line front end: config parsing, dispatch and report output.

mod config;
mod output;
mod run;

use std::io::Write;

pub use config::{parse_config, serialize, Command, OutputFormat, ParamValue, RunConfig};
pub use output::{format_float, Record, Report, Value};
pub use run::{exit_code, render, run};

use crate::error::Result;

fn execute_inner(text: &str) -> Result<(RunConfig, String)> {
    let config = parse_config(text)?;
    let report = run(&config)?;
    let rendered = render(&config, &report)?;
    Ok((config, rendered))
}

/// Parses `text`, runs it and writes the report to the configured file or
/// to `out`. Diagnostics go to `err` only; nothing reaches `out` on failure.
/// Returns the process exit code.
pub fn execute(text: &str, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let written = execute_inner(text).and_then(|(config, rendered)| match &config.output_path {
        Some(path) => std::fs::write(path, rendered).map_err(Into::into),
        None => out.write_all(rendered.as_bytes()).map_err(Into::into),
    });
    match written {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "geophase: {e}");
            exit_code(&e)
        }
    }
}
