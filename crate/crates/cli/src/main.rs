use std::process::ExitCode;

fn main() -> ExitCode {
    partial_search_cli::run(std::env::args_os())
}
