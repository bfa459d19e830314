use std::io::Write;
use std::process::ExitCode;

use raylander::cli::{error_document, run_args};

fn main() -> ExitCode {
    let (outcome, path) = run_args(std::env::args_os());
    let outcome = match path {
        Some(p) if outcome.status == 0 => match std::fs::write(&p, &outcome.document) {
            Ok(()) => return ExitCode::SUCCESS,
            Err(e) => error_document(1, format!("cannot write {}: {e}", p.display()), "io-error", "domain"),
        },
        _ => outcome,
    };
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(outcome.document.as_bytes());
    let _ = out.flush();
    ExitCode::from(outcome.status as u8)
}
