use std::process::ExitCode;

use clap::Parser;
use dimerbfz_cli::{open_session, run, serve, Cli, CliError, Command};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("DIMERBFZ_LOG", "error")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Serve { source, load, port } => open_session(source, load.as_deref()).and_then(|s| {
            let rt = tokio::runtime::Runtime::new().map_err(|e| CliError::Failure(e.to_string()))?;
            rt.block_on(serve(s, *port))?;
            Ok(dimerbfz_cli::Output {
                stdout: String::new(),
                code: 0,
            })
        }),
        _ => run(&cli),
    };
    match result {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
