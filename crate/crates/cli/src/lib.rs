//! Command-line sweeps over the effective-capacity toolkit, emitting
//! self-describing CSV files.

pub mod config;
pub mod csv;
pub mod error;
pub mod jobs;

use clap::Parser;

pub use error::{CliError, CliResult};
pub use jobs::{run, Job, Outcome};

#[derive(Debug, Parser)]
#[command(name = "effcap-kit", version, about = "Effective-capacity sweeps and bundled recipes")]
pub struct Cli {
    #[command(subcommand)]
    pub job: Job,
}

/// Runs the job and writes its CSV; returns the summary lines.
pub fn execute(job: &Job) -> CliResult<Outcome> {
    let outcome = run(job)?;
    let text = outcome.csv(job.name())?;
    csv::write_file(&outcome.output, &text)?;
    Ok(outcome)
}
