use std::process::ExitCode;

use clap::Parser;
use effcap_kit::{execute, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(&cli.job) {
        Ok(outcome) => {
            println!(
                "wrote {} rows to {}",
                outcome.table.rows.len(),
                outcome.output.display()
            );
            for line in &outcome.summary {
                println!("{line}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("effcap-kit {}: {e}", cli.job.name());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
