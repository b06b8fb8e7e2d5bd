mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use output::Context;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let raw: Vec<String> = std::env::args().skip(1).collect();
    let ctx = Context::new(cli.out, cli.format, cli.seed, cli.quiet, &raw);
    let result = match &cli.command {
        Command::Build(a) => commands::build(&ctx, a),
        Command::Spectrum(a) => commands::spectrum(&ctx, a),
        Command::Solve(a) => commands::solve(&ctx, a),
        Command::Sample(a) => commands::sample(&ctx, a),
        Command::Experiment(a) => commands::experiment(&ctx, a),
        Command::Bench(a) => commands::bench(&ctx, a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}
