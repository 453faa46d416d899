use std::io::Write;
use std::process::ExitCode;

use handle3_cli::{run_with, Env};

fn main() -> ExitCode {
    let (env, warning) = Env::from_process();
    let out = run_with(std::env::args(), &env, warning.into_iter().collect());
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}
