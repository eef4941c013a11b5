use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use cubicalforms_cli::{run, thread_cap, Cli, CliError, EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, THREADS_ENV};

fn exit(code: i32) -> ExitCode {
    ExitCode::from(code as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => exit(EXIT_OK),
                _ => exit(EXIT_USAGE),
            };
        }
    };
    let env = std::env::var(THREADS_ENV).ok();
    match thread_cap(env.as_deref()) {
        Ok(Some(n)) => {
            // only fails if a pool already exists, which cannot happen here
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        Ok(None) => {}
        Err(e) => {
            eprintln!("error: {e}");
            return exit(e.exit_code());
        }
    }
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return exit(e.exit_code());
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &outcome.body)
            .map_err(|e| CliError::Compute(format!("{}: {e}", path.display()))),
        None => {
            print!("{}", outcome.body);
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return exit(EXIT_MISMATCH);
    }
    if let Some(term) = &outcome.mismatch {
        eprintln!("mismatch: {term}");
    }
    exit(outcome.exit_code())
}
