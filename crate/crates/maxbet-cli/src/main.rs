mod certificate;
mod cli;
mod commands;
mod parse;

use clap::Parser;

use crate::cli::{Cli, Command};

fn main() {
    let cli = Cli::parse();
    let threads = maxbet_core::exec::configure_threads(cli.threads);
    if cli.threads > 0 {
        eprintln!("worker threads: {}", threads);
    }
    let result = match &cli.command {
        Command::Certify(args) => commands::cmd_certify(args),
        Command::Meshitup(args) => commands::cmd_meshitup(args),
        Command::Minimize(args) => commands::cmd_minimize(args),
        Command::Heatmap(args) => commands::cmd_heatmap(args),
        Command::Simulate(args) => commands::cmd_simulate(args),
        Command::Selfcheck(args) => commands::cmd_selfcheck(args),
        Command::Conjecture(args) => commands::cmd_conjecture(args),
    };
    match result {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {:#}", e);
            std::process::exit(commands::EXIT_NOT_CERTIFIED);
        }
    }
}
