use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = bfree::cli::Cli::parse();
    let stdout = std::io::stdout();
    match bfree::cli::run(&cli, &mut stdout.lock()) {
        Ok(code) => ExitCode::from(code),
        Err(bfree::cli::CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
