use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(anisowalk::run(std::env::args_os()) as u8)
}
