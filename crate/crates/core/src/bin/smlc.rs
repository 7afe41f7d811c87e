use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(smlc::cli::run(std::env::args_os()))
}
