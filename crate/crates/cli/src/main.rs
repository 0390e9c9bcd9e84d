use std::process::ExitCode;

use clap::Parser;
use gext::{execute, write_outputs, Cli, EXIT_INPUT};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let finished = execute(&cli);
    print!("{}", finished.report);
    if finished.status == EXIT_INPUT {
        eprintln!("gext: {} failed, see the error in the report", cli.command.name());
    }
    if let Some(dir) = &cli.config.out {
        if let Err(e) = write_outputs(dir, &finished) {
            eprintln!("gext: {e}");
            return ExitCode::from(EXIT_INPUT as u8);
        }
    }
    ExitCode::from(finished.status as u8)
}
