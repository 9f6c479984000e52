use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    // help and version print and exit here; usage errors become a report below
    let out = match awfslab_cli::Cli::try_parse() {
        Ok(c) => c.out,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(_) => None,
    };
    let args: Vec<String> = std::env::args().skip(1).collect();
    let outcome = awfslab_cli::run(&args);
    if let Some(line) = outcome.error_line() {
        eprintln!("{line}");
    }
    match out {
        Some(p) => {
            if let Err(e) = std::fs::write(&p, outcome.text()) {
                eprintln!("io: {}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{}", outcome.text()),
    }
    ExitCode::from(outcome.exit as u8)
}
