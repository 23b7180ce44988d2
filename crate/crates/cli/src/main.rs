mod commands;
mod config;
mod error;
mod pipeline;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};

use logmine_core::ast::record::ExtractOptions;
use logmine_core::ingest::CandidateSource;

use commands::{
    cmd_analyze, cmd_baseline, cmd_extract, cmd_filter_events, cmd_report, parse_query_date,
    AnalyzeSettings, BaselineSettings, ExtractCmdSettings, FilterEventsSettings, ReportSettings,
};
use config::{pick, require_path, validate_output_dir, validate_parallelism, FileConfig};
use error::CliError;
use pipeline::ExtractSettings;

/// Mine removed `console.log` statements from commit histories and
/// analyze the resulting record corpus.
#[derive(Parser)]
#[command(name = "logmine", version)]
struct Cli {
    /// TOML config file; explicit command-line flags take precedence
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scan push-event files for commits whose messages announce log removal
    FilterEvents(FilterEventsArgs),
    /// Recover deleted console.log calls for each candidate commit
    Extract(ExtractArgs),
    /// Aggregate an extracted record file into the corpus report
    Analyze(AnalyzeArgs),
    /// Census of function kinds over a source corpus
    Baseline(BaselineArgs),
    /// Summarize repository metadata: metric statistics and activity
    Report(ReportArgs),
}

#[derive(Args)]
struct FilterEventsArgs {
    /// Event files (newline-delimited JSON, optionally gzip-compressed)
    #[arg(long = "input", value_name = "FILE")]
    inputs: Vec<PathBuf>,
    /// Where candidates.ndjson is written
    #[arg(long, value_name = "DIR")]
    output_dir: Option<PathBuf>,
    /// Match removal messages case-sensitively
    #[arg(long, action = ArgAction::SetTrue)]
    case_sensitive: Option<bool>,
    /// Let the removal pattern's wildcard cross line breaks
    #[arg(long, action = ArgAction::SetTrue)]
    match_across_lines: Option<bool>,
    /// Consider only the first commit of each push
    #[arg(long, action = ArgAction::SetTrue)]
    first_commit_only: Option<bool>,
    /// Provenance recorded on each candidate
    #[arg(long, value_enum, default_value_t = SourceArg::Archive)]
    source: SourceArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum SourceArg {
    Archive,
    QuerySample,
    Local,
}

impl From<SourceArg> for CandidateSource {
    fn from(value: SourceArg) -> CandidateSource {
        match value {
            SourceArg::Archive => CandidateSource::Archive,
            SourceArg::QuerySample => CandidateSource::QuerySample,
            SourceArg::Local => CandidateSource::Local,
        }
    }
}

#[derive(Args)]
struct ExtractArgs {
    /// Candidate-commit file from filter-events
    #[arg(long, value_name = "FILE")]
    candidates: Option<PathBuf>,
    /// Directory of recorded commit responses
    #[arg(long, value_name = "DIR")]
    fixtures: Option<PathBuf>,
    /// Where records.ndjson and diagnostics.ndjson are written
    #[arg(long, value_name = "DIR")]
    output_dir: Option<PathBuf>,
    /// Also analyze .jsx/.tsx/.mjs/.cjs files
    #[arg(long, action = ArgAction::SetTrue)]
    extended_extensions: Option<bool>,
    /// Console methods to extract (comma-separated)
    #[arg(long, value_name = "NAMES", value_delimiter = ',')]
    console_methods: Vec<String>,
    /// Leave &&, || and ?? out of cyclomatic complexity
    #[arg(long, action = ArgAction::SetTrue)]
    no_logical_operators: Option<bool>,
    /// Worker count for commit processing
    #[arg(long, value_name = "N")]
    parallelism: Option<usize>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Record file from extract
    #[arg(long, value_name = "FILE")]
    records: Option<PathBuf>,
    /// Where corpus-report.txt is written
    #[arg(long, value_name = "DIR")]
    output_dir: Option<PathBuf>,
    /// Also export every table as a CSV file
    #[arg(long, action = ArgAction::SetTrue)]
    csv: Option<bool>,
}

#[derive(Args)]
struct BaselineArgs {
    /// Directory of source files to census
    #[arg(long, value_name = "DIR")]
    corpus: Option<PathBuf>,
    /// Where baseline.txt is written
    #[arg(long, value_name = "DIR")]
    output_dir: Option<PathBuf>,
    /// Also census .jsx/.tsx/.mjs/.cjs files
    #[arg(long, action = ArgAction::SetTrue)]
    extended_extensions: Option<bool>,
}

#[derive(Args)]
struct ReportArgs {
    /// Repository metadata file (newline-delimited JSON)
    #[arg(long, value_name = "FILE")]
    metadata: Option<PathBuf>,
    /// Where repo-report.txt is written
    #[arg(long, value_name = "DIR")]
    output_dir: Option<PathBuf>,
    /// Anchor for the activity curve (YYYY-MM-DD or RFC 3339); defaults to
    /// the newest last-update timestamp
    #[arg(long, value_name = "DATE")]
    query_date: Option<String>,
    /// Also export every table as a CSV file
    #[arg(long, action = ArgAction::SetTrue)]
    csv: Option<bool>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.code().clamp(0, 255) as u8)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = FileConfig::load(cli.config.as_deref())?;
    match cli.command {
        Command::FilterEvents(args) => {
            let inputs = if args.inputs.is_empty() {
                file.inputs.clone().unwrap_or_default()
            } else {
                args.inputs
            };
            if inputs.is_empty() {
                return Err(CliError::input(
                    "at least one --input file (or `inputs` in the config) is required",
                ));
            }
            let output_dir = require_path(args.output_dir, file.output_dir, "--output-dir")?;
            let input_refs: Vec<&std::path::Path> = inputs.iter().map(PathBuf::as_path).collect();
            validate_output_dir(&output_dir, &input_refs)?;
            cmd_filter_events(&FilterEventsSettings {
                inputs,
                output_dir,
                case_sensitive: pick(args.case_sensitive, file.case_sensitive, false),
                match_across_lines: pick(args.match_across_lines, file.match_across_lines, false),
                first_commit_only: pick(args.first_commit_only, file.first_commit_only, false),
                source: args.source.into(),
            })
        }
        Command::Extract(args) => {
            let candidates = require_path(args.candidates, file.candidates, "--candidates")?;
            let fixtures = require_path(args.fixtures, file.fixtures, "--fixtures")?;
            let output_dir = require_path(args.output_dir, file.output_dir, "--output-dir")?;
            validate_output_dir(&output_dir, &[&candidates, &fixtures])?;
            let parallelism =
                validate_parallelism(pick(args.parallelism, file.parallelism, 1))?;
            let console_methods = if args.console_methods.is_empty() {
                file.console_methods
                    .clone()
                    .unwrap_or_else(|| vec!["log".to_string()])
            } else {
                args.console_methods
            };
            let count_logical = match args.no_logical_operators {
                Some(true) => false,
                _ => file.count_logical_operators.unwrap_or(true),
            };
            cmd_extract(&ExtractCmdSettings {
                candidates,
                fixtures,
                output_dir,
                extract: ExtractSettings {
                    extended_extensions: pick(
                        args.extended_extensions,
                        file.extended_extensions,
                        false,
                    ),
                    options: ExtractOptions {
                        console_methods,
                        count_logical_operators: count_logical,
                    },
                    parallelism,
                },
            })
        }
        Command::Analyze(args) => {
            let records = require_path(args.records, file.records, "--records")?;
            let output_dir = require_path(args.output_dir, file.output_dir, "--output-dir")?;
            validate_output_dir(&output_dir, &[&records])?;
            cmd_analyze(&AnalyzeSettings {
                records,
                output_dir,
                csv: pick(args.csv, file.csv, false),
            })
        }
        Command::Baseline(args) => {
            let corpus = require_path(args.corpus, file.corpus, "--corpus")?;
            let output_dir = require_path(args.output_dir, file.output_dir, "--output-dir")?;
            validate_output_dir(&output_dir, &[&corpus])?;
            cmd_baseline(&BaselineSettings {
                corpus,
                output_dir,
                extended_extensions: pick(
                    args.extended_extensions,
                    file.extended_extensions,
                    false,
                ),
            })
        }
        Command::Report(args) => {
            let metadata = require_path(args.metadata, file.metadata, "--metadata")?;
            let output_dir = require_path(args.output_dir, file.output_dir, "--output-dir")?;
            validate_output_dir(&output_dir, &[&metadata])?;
            let query_date = args
                .query_date
                .or(file.query_date.clone())
                .map(|text| parse_query_date(&text))
                .transpose()?;
            cmd_report(&ReportSettings {
                metadata,
                output_dir,
                query_date,
                csv: pick(args.csv, file.csv, false),
            })
        }
    }
}
