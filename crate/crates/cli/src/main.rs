use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use wavedfs_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(record) => {
            let text = serde_json::to_string_pretty(&record).expect("record serializes");
            let _ = writeln!(std::io::stdout(), "{text}");
            if record.violations.is_empty() {
                ExitCode::SUCCESS
            } else {
                for v in &record.violations {
                    eprintln!("violation: {v}");
                }
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
