use std::io::{self, Write};
use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, out, err) = fixcalc_cli::run(std::env::args_os());
    let _ = io::stdout().write_all(out.as_bytes());
    let _ = io::stderr().write_all(err.as_bytes());
    ExitCode::from(code)
}
