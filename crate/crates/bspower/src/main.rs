use std::process::ExitCode;

fn main() -> ExitCode {
    bspower::cli::main_with_args(std::env::args_os())
}
