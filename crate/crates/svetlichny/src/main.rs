use std::process::ExitCode;

fn main() -> ExitCode {
    svetlichny::cli::run()
}
