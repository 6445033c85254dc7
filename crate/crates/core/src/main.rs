use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(adsearch::cli::main_entry() as u8)
}
