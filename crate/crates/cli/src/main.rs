use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use venn_nn_cli::args::{Cli, Command};
use venn_nn_cli::config::RunConfig;
use venn_nn_cli::error::CliError;
use venn_nn_cli::run;

fn dispatch(cli: &Cli) -> Result<String, CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("--threads: {e}")))?;
    }
    match &cli.command {
        Command::Inspect(args) => run::inspect(args),
        Command::Online(args) => {
            let config = RunConfig::from_online(args)?;
            run::execute(&config, &args.common.out_dir)
        }
        Command::Batch(args) => {
            let config = RunConfig::from_batch(args)?;
            run::execute(&config, &args.common.out_dir)
        }
        Command::Run(args) => {
            let config = RunConfig::load(&args.config)?;
            run::execute(&config, &args.out_dir)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match dispatch(&cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
