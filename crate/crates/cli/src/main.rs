mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use maintkit::dataset::Schema;
use maintkit::evaluation::ReportFormat;

/// Exit status 1: some inputs could not be processed. Status 2: the
/// invocation or configuration is wrong and nothing was done.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Data(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Data(_) => 1,
            Failure::Usage(_) => 2,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "maintkit", version, about = "Maintainability metrics, dataset curation and refactoring evaluation for Python code")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// TOML configuration file
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed for anything randomized (the split)
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// markdown, csv or json
    #[arg(long, global = true, value_parser = parse_format)]
    pub format: Option<ReportFormat>,
    /// Worker threads; defaults to the number of processors
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Validate inputs and configuration without writing anything
    #[arg(long, global = true)]
    pub dry_run: bool,
}

fn parse_format(s: &str) -> Result<ReportFormat, String> {
    s.parse().map_err(|e: maintkit::evaluation::UnsupportedFormat| e.to_string())
}

fn parse_triple<T: std::str::FromStr + Copy>(s: &str) -> Result<[T; 3], String>
where
    T::Err: std::fmt::Display,
{
    let parts = s
        .split(',')
        .map(|p| p.trim().parse::<T>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<Vec<T>, _>>()?;
    <[T; 3]>::try_from(parts).map_err(|p| format!("expected three comma-separated values, got {}", p.len()))
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeArg {
    Training,
    Inference,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Report SLOC, CC, Halstead effort and MI for files, directories or stdin
    Metrics {
        /// Python files or directories (searched for *.py); none or "-" reads stdin
        paths: Vec<PathBuf>,
    },
    /// Attach metrics and a prompt to every record of a JSONL dataset
    Augment {
        input: PathBuf,
        #[arg(long)]
        schema: Option<Schema>,
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Malformed lines tolerated before giving up
        #[arg(long)]
        max_malformed: Option<usize>,
    },
    /// Partition a JSONL file into train/validation/test files
    Split {
        input: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        /// train,validation,test fractions
        #[arg(long, value_name = "T,V,S", value_parser = parse_triple::<f64>, conflicts_with = "sizes")]
        ratios: Option<[f64; 3]>,
        /// train,validation,test record counts
        #[arg(long, value_name = "T,V,S", value_parser = parse_triple::<usize>)]
        sizes: Option<[usize; 3]>,
    },
    /// Render the maintainability prompt for a snippet or a dataset
    Prompt {
        /// Python file, or "-" / nothing for stdin
        path: Option<PathBuf>,
        /// Refactored code to append as the response (training form)
        #[arg(long, conflicts_with = "records")]
        refactored: Option<PathBuf>,
        /// JSONL dataset instead of a single snippet
        #[arg(long)]
        records: Option<PathBuf>,
        #[arg(long)]
        schema: Option<Schema>,
        #[arg(long, value_enum, default_value = "inference")]
        mode: ModeArg,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Ask a completion service to refactor each record and gate the results
    Refactor {
        input: PathBuf,
        #[arg(long)]
        schema: Option<Schema>,
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Overrides completion.endpoint
        #[arg(long)]
        endpoint: Option<String>,
        /// Overrides completion.model
        #[arg(long)]
        model: Option<String>,
    },
    /// Compare metric distributions of JSONL code groups
    ///
    /// Each group is `[NAME=]PATH[#FIELD]`. FIELD defaults to `code` and may
    /// be a JSON pointer such as `/meta/src`. NAME defaults to the file stem.
    Evaluate {
        #[arg(long, value_name = "GROUP")]
        baseline: String,
        #[arg(long, value_name = "GROUP")]
        candidate: String,
        /// Reference group shown first in the table
        #[arg(long, value_name = "GROUP")]
        dataset: Option<String>,
        /// Add token-overlap similarity of candidate against baseline, paired by line
        #[arg(long)]
        similarity: bool,
        /// Add box-plot summaries per group and metric
        #[arg(long)]
        boxplots: bool,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(code) => code,
        Err(f) => {
            let (Failure::Usage(m) | Failure::Data(m)) = &f;
            eprintln!("error: {m}");
            ExitCode::from(f.code())
        }
    }
}
