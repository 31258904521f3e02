// SPDX-License-Identifier: Apache-2.0

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

/// Geometric-phase spin simulator and gate synthesizer.
#[derive(Parser)]
#[command(version, about)]
struct Args {
    /// Run configuration in key=value form; `-` reads standard input.
    config: PathBuf,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let text = if args.config.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map(|_| s)
    } else {
        std::fs::read_to_string(&args.config)
    };
    let text = match text {
        Ok(t) => t,
        Err(e) => {
            eprintln!("geophase: cannot read {}: {e}", args.config.display());
            return ExitCode::from(1);
        }
    };
    let code = geophase::cli::execute(&text, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    ExitCode::from(code as u8)
}
