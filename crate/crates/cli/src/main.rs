use std::process::ExitCode;

fn main() -> ExitCode {
    semiref_cli::main_with_args(std::env::args_os())
}
