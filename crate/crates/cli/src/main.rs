use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use epkit_cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let report = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("epkit: {e}");
            return ExitCode::from(2);
        }
    };
    let json = match report.to_json() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("epkit: cannot serialize report: {e}");
            return ExitCode::from(2);
        }
    };
    let written = match &cli.common.output {
        Some(path) => fs::write(path, &json).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout()
            .lock()
            .write_all(json.as_bytes())
            .map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("epkit: {e}");
        return ExitCode::from(2);
    }
    if report.violated() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
