use std::process::ExitCode;

fn main() -> ExitCode {
    match floquet_cli::parse_args(std::env::args_os()) {
        Ok(spec) => ExitCode::from(floquet_cli::run(&spec)),
        Err(floquet_cli::CliError::Info(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
