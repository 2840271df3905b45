mod args;
mod csvio;
mod error;
mod export;
mod generate;
mod method;
mod render;
mod report;
mod score;

use clap::Parser;

use args::{Cli, Command};
use error::{exit, CliError};

fn threads(cmd: &Command) -> Option<usize> {
    match cmd {
        Command::Generate(a) => a.common.threads,
        Command::Score(a) => a.common.threads,
        Command::Report(a) => a.common.threads,
        Command::ExportMock(a) => a.common.threads,
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    if let Some(n) = threads(&cli.command) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Internal(e.to_string()))?;
    }
    match &cli.command {
        Command::Generate(a) => generate::run(a),
        Command::Score(a) => score::run(a),
        Command::Report(a) => report::run(a),
        Command::ExportMock(a) => export::run(a),
    }
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(()) => exit::OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}
