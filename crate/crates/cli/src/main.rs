use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use saito_cli::{load_curve, run_corpus, run_report, CliError, Command};

#[derive(Parser)]
#[command(
    name = "saito",
    about = "Exact invariants of plane curve singularities: value semigroups, \
             standard bases of differentials, logarithmic (Saito) bases, and \
             Milnor/Tjurina numbers."
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Curve file to analyze
    #[arg(long)]
    input: PathBuf,
    /// Working precision (total-degree truncation); overrides the file's value
    #[arg(long)]
    precision: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Subcommand)]
enum Cmd {
    /// Value semigroup of each branch: generators, conductor, gaps
    Semigroup(RunArgs),
    /// Standard basis of the differential module and its value gaps
    Stdbasis(RunArgs),
    /// Logarithmic basis: the selected pair, unit, and cofactors
    Saito(RunArgs),
    /// Milnor and Tjurina numbers, value gaps, residue indices
    Invariants(RunArgs),
    /// Run everything and replay all cross-checks; nonzero exit on mismatch
    Verify(RunArgs),
    /// All report sections
    All(RunArgs),
    /// Verify every *.curve file in a directory
    Corpus {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

fn run(args: &RunArgs, command: Command) -> Result<String, CliError> {
    let cf = load_curve(&args.input)?;
    let report = run_report(&cf, command, args.precision)?;
    Ok(match args.format {
        Format::Text => report.text_format(),
        Format::Machine => report.machine_format(),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Cmd::Semigroup(a) => run(a, Command::Semigroup),
        Cmd::Stdbasis(a) => run(a, Command::Stdbasis),
        Cmd::Saito(a) => run(a, Command::Saito),
        Cmd::Invariants(a) => run(a, Command::Invariants),
        Cmd::Verify(a) => run(a, Command::Verify),
        Cmd::All(a) => run(a, Command::All),
        Cmd::Corpus { dir, format } => run_corpus(dir).map(|summary| match format {
            Format::Text => summary.text_format(),
            Format::Machine => summary.machine_format(),
        }),
    };
    match result {
        Ok(text) => {
            print!("{}", text);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
