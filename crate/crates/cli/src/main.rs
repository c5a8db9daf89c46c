use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = boxwig_cli::Cli::parse();
    match boxwig_cli::run(&cli, argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("boxwig: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
