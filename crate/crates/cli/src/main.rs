use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use glt_cli::{run, RunConfig};

fn main() -> ExitCode {
    let cfg = RunConfig::parse();
    let output = match run(&cfg) {
        Ok(output) => output,
        Err(e) => {
            eprintln!("glt: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let written = match &cfg.out {
        Some(path) => {
            let path = output.target_path(path);
            std::fs::write(&path, &output.text)
                .map_err(|e| format!("cannot write {}: {e}", path.display()))
        }
        None => std::io::stdout()
            .lock()
            .write_all(output.text.as_bytes())
            .map_err(|e| format!("cannot write to stdout: {e}")),
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("glt: {msg}");
            ExitCode::FAILURE
        }
    }
}
