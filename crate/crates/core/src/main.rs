use std::process::ExitCode;

fn main() -> ExitCode {
    spadplus::cli::run(std::env::args_os())
}
