use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use lamp::cli::{self, Cli};
use serde_json::json;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("LAMP_LOG", "warn"))
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            report("", "ConfigError", &e.to_string());
            return ExitCode::from(2);
        }
    };
    let name = cli.command.name();
    match cli::run(&cli.command) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            report(name, e.kind(), &e.to_string());
            ExitCode::from(if e.is_config() { 2 } else { 1 })
        }
    }
}

fn report(subcommand: &str, kind: &str, message: &str) {
    let doc = json!({"error": {"subcommand": subcommand, "kind": kind, "message": message.trim_end()}});
    eprintln!("{doc}");
}
