use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    ExitCode::from(monogamy::cli::main_with_args(std::env::args_os(), &mut out))
}
