use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use omniscio::cli::{self, Command, CounterexampleMode, Format, Verb};

#[derive(Parser)]
#[command(
    name = "omniscio",
    version,
    about = "Secret-key capacity and mutual-dependence bounds"
)]
struct Args {
    #[command(subcommand)]
    verb: VerbArg,
}

#[derive(Subcommand)]
enum VerbArg {
    /// Omniscience rate, secret-key capacity, dual and uniqueness verdict.
    Solve(FileArgs),
    /// Mutual-dependence bound I(A) with its minimizing partitions.
    Mdb(FileArgs),
    /// Decide whether C_SK(A) = I(A).
    Tight {
        #[command(flatten)]
        file: FileArgs,
        /// Also run the partition-search decider and the dual construction.
        #[arg(long)]
        constructive: bool,
    },
    /// Reproduce the six-terminal strict-gap example.
    Counterexample {
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long)]
        json: bool,
    },
    /// Compare the quoted cardinality table with the XOR source.
    Audit {
        #[arg(long)]
        json: bool,
    },
    /// Check normalization, monotonicity and supermodularity of h.
    Validate {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(clap::Args)]
struct FileArgs {
    file: PathBuf,
    #[arg(long)]
    json: bool,
    /// Accept entropy vectors that fail validation.
    #[arg(long)]
    no_validate: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    PaperH,
    Generative,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let (command, json) = match args.verb {
        VerbArg::Solve(f) => (file_command(Verb::Solve, &f), f.json),
        VerbArg::Mdb(f) => (file_command(Verb::Mdb, &f), f.json),
        VerbArg::Tight { file, constructive } => {
            (file_command(Verb::Tight { constructive }, &file), file.json)
        }
        VerbArg::Counterexample { mode, json } => {
            let mode = match mode {
                ModeArg::PaperH => CounterexampleMode::PaperH,
                ModeArg::Generative => CounterexampleMode::Generative,
            };
            (Command::new(Verb::Counterexample(mode), None), json)
        }
        VerbArg::Audit { json } => (Command::new(Verb::Audit, None), json),
        VerbArg::Validate { file, json } => (Command::new(Verb::Validate, Some(file)), json),
    };
    let format = if json { Format::Json } else { Format::Text };
    match cli::execute(&command) {
        Ok(report) => {
            print!("{}", cli::render_report(&report, format));
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("omniscio: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn file_command(verb: Verb, f: &FileArgs) -> Command {
    Command {
        verb,
        input: Some(f.file.clone()),
        no_validate: f.no_validate,
    }
}
