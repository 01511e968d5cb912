use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(cyclogon_cli::run(std::env::args_os()))
}
