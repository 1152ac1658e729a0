use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod job;
mod render;

use job::{CliError, OutputFormat};

#[derive(Parser)]
#[command(name = "iwasawa", version, about = "Run iwasawa-core jobs described by JSON job files")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a single job file and print its report.
    Run {
        jobfile: PathBuf,
        /// Overrides the job's `output` field.
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Run { jobfile, format } = cli.command;
    let format = format.map(|f| match f {
        Format::Json => OutputFormat::Json,
        Format::Table => OutputFormat::Table,
    });
    match run(&jobfile, format) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(path: &PathBuf, format: Option<OutputFormat>) -> Result<String, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let job = job::parse_job(&text)?;
    let report = job::dispatch(&job, job::max_ring_cardinality()?)?;
    let format = format.unwrap_or(job.output);
    if format == OutputFormat::Json {
        for w in &report.warnings {
            eprintln!("warning: {w}");
        }
    }
    Ok(render::emit(&report, format))
}
