use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(cureplim_cli::dispatch(std::env::args_os()))
}
