use std::process::ExitCode;

use clap::Parser;

mod args;
mod commands;

use args::{Cli, Command};
use commands::CliError;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::GenKnots { knots, format, output } => commands::gen_knots(knots, *format, output.as_deref()),
        Command::Rule { knots, format, output } => commands::rule(knots, *format, output.as_deref()),
        Command::Verify { knots, seed, trials, perturb, output } => {
            commands::verify(knots, *seed, *trials, *perturb, output.as_deref())
        }
        Command::Kernel { knots, grid, q_sweep, output_dir, output } => {
            commands::kernel(knots, *grid as usize, q_sweep.as_deref(), output_dir, output.as_deref())
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 2,
            CliError::Invalid { .. } => 3,
        }
    }
}
