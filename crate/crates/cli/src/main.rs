//! `routesim` command-line front end.
//!
//! Exit codes: 0 success, 1 i/o failure, 2 bad flags, 3 infeasible
//! evaluation, 4 failed bound checks.

mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Eval(a) => commands::eval(a),
        Command::Optimize(a) => commands::optimize(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::VerifyBounds(a) => commands::verify_bounds_cmd(a),
        Command::Simulate(a) => commands::simulate_cmd(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
