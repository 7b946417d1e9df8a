//! Command-line front end: `rbs/v1` documents and the `rbsys` subcommands.

pub mod args;
pub mod commands;
pub mod doc;
pub mod error;
pub mod report;

use std::io::Write;

use serde_json::json;

use args::Cli;
use commands::Settings;
use report::violation_json;

/// Runs one parsed invocation, printing to stdout/stderr; returns the exit code.
pub fn run(cli: &Cli) -> i32 {
    let settings = Settings { max_degree: cli.max_degree, cap: cli.cap };
    let mut stdout = std::io::stdout().lock();
    match commands::execute(&cli.command, settings) {
        Ok(report) => {
            let text = if cli.json { format!("{}\n", doc::pretty(&report.to_json())) } else { report.to_text() };
            let _ = stdout.write_all(text.as_bytes());
            report.exit_code()
        }
        Err(e) => {
            let code = e.exit_code();
            if cli.json {
                let mut out = json!({
                    "status": if code == error::EXIT_FAIL { "fail" } else { "error" },
                    "exit_code": code,
                    "message": e.to_string(),
                });
                if let Some(v) = e.violation() {
                    out["witness"] = violation_json(v);
                }
                let _ = writeln!(stdout, "{}", doc::pretty(&out));
            } else if code == error::EXIT_FAIL {
                let _ = writeln!(stdout, "{e}\nFAIL");
            } else {
                eprintln!("error: {e}");
            }
            code
        }
    }
}
