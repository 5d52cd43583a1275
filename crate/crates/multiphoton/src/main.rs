use std::process::ExitCode;

fn main() -> ExitCode {
    let code = multiphoton::cli::run(std::env::args());
    ExitCode::from(code as u8)
}
