//! `glinf`: characters, verification suites, engine comparisons, transport
//! solving and the golden battery.

mod commands;
mod config;
mod error;
mod output;

use std::panic::{catch_unwind, AssertUnwindSafe};

use clap::{Parser, Subcommand};
use serde_json::json;

use commands::battery::BatteryArgs;
use config::Params;
use error::CliResult;

/// Exit codes: 0 pass, 1 mismatch or failed check, 2 invalid configuration,
/// 3 internal failure (pole, integrality, i/o).
#[derive(Parser)]
#[command(name = "glinf", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute a character by one engine and cross-check it against another
    Char(Params),
    /// Run verification suites on a module
    Verify(Params),
    /// Coefficientwise diff of two engines (--method left,right)
    Compare(Params),
    /// Solve transport constants for swap, rotation or iota
    Iso(Params),
    /// Golden artifacts plus every suite on the battery
    Battery(BatteryArgs),
}

fn run(cmd: Cmd) -> CliResult<bool> {
    let (art, params) = match cmd {
        Cmd::Char(p) => {
            let p = p.resolve()?;
            (commands::char_cmd(&p)?, p)
        }
        Cmd::Verify(p) => {
            let p = p.resolve()?;
            (commands::verify::verify_cmd(&p)?, p)
        }
        Cmd::Compare(p) => {
            let p = p.resolve()?;
            (commands::compare_cmd(&p)?, p)
        }
        Cmd::Iso(p) => {
            let p = p.resolve()?;
            (commands::iso::iso_cmd(&p)?, p)
        }
        Cmd::Battery(mut b) => {
            b.params = b.params.resolve()?;
            let art = commands::battery::battery_cmd(&b)?;
            (art, b.params)
        }
    };
    output::emit(&art, &params)?;
    Ok(art.passed)
}

fn main() {
    let cli = Cli::parse();
    let code = match catch_unwind(AssertUnwindSafe(|| run(cli.cmd))) {
        Ok(Ok(true)) => 0,
        Ok(Ok(false)) => 1,
        Ok(Err(e)) => {
            println!("{}", e.to_json());
            eprintln!("glinf: {e}");
            e.exit_code()
        }
        Err(_) => {
            println!("{}", json!({ "error": { "kind": "internal", "message": "panic", "exit_code": 3 } }));
            3
        }
    };
    std::process::exit(code);
}
