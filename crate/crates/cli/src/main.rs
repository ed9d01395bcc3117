use clap::Parser;
use comms_cli::{run, summary, CliError, Cli, Command};
use std::process::ExitCode;

fn main() -> ExitCode {
    let Cli { command: Command::Run(args) } = Cli::parse();
    match run(&args) {
        Ok(report) => {
            print!("{}", summary(&report));
            ExitCode::SUCCESS
        }
        Err(err) => {
            if let CliError::Unsound { report, .. } = &err {
                print!("{}", summary(report));
                for v in report.diff.iter().flat_map(|d| &d.violations) {
                    eprintln!("line {}: {} = {} escapes {}", v.line, v.var, v.concrete, v.abstract_value);
                }
            }
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
