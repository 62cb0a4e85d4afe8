use std::process::ExitCode;

fn main() -> ExitCode {
    trig_approx::cli::main_with_args(std::env::args_os())
}
