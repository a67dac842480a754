//! Command line front end for the analysis pipeline.
//!
//! Diagnostics go to stderr; results (tables, graphs, findings) go to
//! stdout or to files. Exit codes: 0 success, 2 rejected configuration,
//! 3 bad input data, 4 broken internal invariant.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use prodmine::discovery::build_dfg;
use prodmine::eventlog::{read_log_file, validate_log, IngestOptions};
use prodmine::report::{
    run_analysis, run_simulation, AnalysisConfig, OutputFormat, PipelineError,
};

/// Environment variable read when no output directory is given.
const OUTPUT_DIR_VAR: &str = "PRODMINE_OUTPUT_DIR";

#[derive(Parser)]
#[command(name = "prodmine", version, about = "Process-mining productivity analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
#[allow(clippy::large_enum_variant)] // parsed once, dispatched once
enum Command {
    /// Compare a before and an after log and write the report tables.
    Analyze(AnalyzeArgs),
    /// Run a queue scenario: baseline network vs automated intervention.
    Simulate(SimulateArgs),
    /// Export the directly-follows graph of one log.
    Discover(DiscoverArgs),
    /// Lint one log for structural defects.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// TOML file carrying any subset of the analyze options.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    before_log: Option<PathBuf>,
    #[arg(long)]
    after_log: Option<PathBuf>,
    /// Activity classification rules (TOML).
    #[arg(long)]
    classification: Option<PathBuf>,
    /// Activity performing the automated work in the after log.
    #[arg(long)]
    automated_task: Option<String>,
    /// Activity the automation replaced in the before log.
    #[arg(long)]
    replaced_task: Option<String>,
    /// Fixed reallocated-time share; estimated from the logs when absent.
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Minimum trace share for a path to be reported.
    #[arg(long)]
    min_support: Option<f64>,
    /// Apply the with-customer factor preset in the queue table.
    #[arg(long)]
    include_customer: Option<bool>,
    #[arg(long)]
    output_dir: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Derive report timestamps from log content for byte-identical reruns.
    #[arg(long)]
    reproducible: bool,
    #[arg(long)]
    before_era: Option<String>,
    #[arg(long)]
    after_era: Option<String>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Scenario definition (TOML).
    #[arg(long)]
    scenario: PathBuf,
    #[arg(long)]
    output_dir: Option<PathBuf>,
}

#[derive(Args)]
struct DiscoverArgs {
    #[arg(long)]
    log: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: GraphFormat,
    /// Write here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    log: PathBuf,
    /// Skip malformed entries instead of failing on them.
    #[arg(long)]
    lenient: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

impl From<FormatArg> for OutputFormat {
    fn from(value: FormatArg) -> Self {
        match value {
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Csv => OutputFormat::Csv,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Json,
    Dot,
}

/// The analyze options as they may appear in a config file: every field
/// optional, unknown keys rejected.
#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    before_log_path: Option<PathBuf>,
    after_log_path: Option<PathBuf>,
    classification_path: Option<PathBuf>,
    automated_task: Option<String>,
    replaced_task: Option<String>,
    kappa: Option<f64>,
    alpha: Option<f64>,
    min_support: Option<f64>,
    include_customer: Option<bool>,
    output_dir: Option<PathBuf>,
    format: Option<OutputFormat>,
    reproducible: Option<bool>,
    before_era_label: Option<String>,
    after_era_label: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(args) => analyze(args),
        Command::Simulate(args) => simulate(args),
        Command::Discover(args) => discover(args),
        Command::Validate(args) => validate(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn analyze(args: AnalyzeArgs) -> Result<(), PipelineError> {
    let config = merge_config(args)?;
    eprintln!(
        "analyzing {} vs {}",
        config.before_log_path.display(),
        config.after_log_path.display()
    );
    let report = run_analysis(&config)?;

    for warning in &report.warnings {
        eprintln!("warning: {warning}");
    }
    for era_only in &report.era_only_paths {
        eprintln!(
            "note: path {} ({} -> {}) appears only in the {} era",
            era_only.path, era_only.initial_activity, era_only.final_activity, era_only.era
        );
    }
    println!(
        "wrote {} paths x 2 customer-time treatments to {}",
        report.metrics_with_customer.len(),
        config.output_dir.display()
    );
    let tables = [
        ("with customer time", &report.metrics_with_customer),
        ("without customer time", &report.metrics_without_customer),
    ];
    for (treatment, table) in tables {
        for metrics in table {
            println!(
                "path {} ({treatment}): delta_p {:.4}, psi {:.4}, gamma {:.4}, theta {:.4}",
                metrics.path, metrics.delta_p, metrics.psi, metrics.gamma, metrics.theta
            );
        }
    }
    Ok(())
}

fn merge_config(args: AnalyzeArgs) -> Result<AnalysisConfig, PipelineError> {
    let file: FileConfig = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            toml::from_str(&text).map_err(|err| PipelineError::Config(err.to_string()))?
        }
        None => FileConfig::default(),
    };

    let output_dir = args
        .output_dir
        .or(file.output_dir)
        .or_else(|| std::env::var_os(OUTPUT_DIR_VAR).map(PathBuf::from));

    let require = |field: Option<PathBuf>, flag: &str| {
        field.ok_or_else(|| {
            PipelineError::Config(format!("--{flag} is required (flag or config file)"))
        })
    };

    Ok(AnalysisConfig {
        before_log_path: require(args.before_log.or(file.before_log_path), "before-log")?,
        after_log_path: require(args.after_log.or(file.after_log_path), "after-log")?,
        classification_path: require(
            args.classification.or(file.classification_path),
            "classification",
        )?,
        automated_task: args
            .automated_task
            .or(file.automated_task)
            .ok_or_else(|| {
                PipelineError::Config(
                    "--automated-task is required (flag or config file)".to_string(),
                )
            })?,
        replaced_task: args.replaced_task.or(file.replaced_task),
        kappa: args.kappa.or(file.kappa),
        alpha: args.alpha.or(file.alpha).unwrap_or(0.5),
        min_support: args.min_support.or(file.min_support).unwrap_or(0.05),
        include_customer: args
            .include_customer
            .or(file.include_customer)
            .unwrap_or(true),
        output_dir: require(output_dir, "output-dir")?,
        format: args
            .format
            .map(OutputFormat::from)
            .or(file.format)
            .unwrap_or_default(),
        reproducible: args.reproducible || file.reproducible.unwrap_or(false),
        before_era_label: args
            .before_era
            .or(file.before_era_label)
            .unwrap_or_else(|| "before".to_string()),
        after_era_label: args
            .after_era
            .or(file.after_era_label)
            .unwrap_or_else(|| "after".to_string()),
    })
}

fn simulate(args: SimulateArgs) -> Result<(), PipelineError> {
    let output_dir = args
        .output_dir
        .or_else(|| std::env::var_os(OUTPUT_DIR_VAR).map(PathBuf::from))
        .ok_or_else(|| {
            PipelineError::Config("--output-dir is required (flag or environment)".to_string())
        })?;
    let artifacts = run_simulation(&args.scenario, &output_dir)?;

    for warning in &artifacts.outcome.baseline.warnings {
        eprintln!("baseline warning: {warning}");
    }
    for warning in &artifacts.outcome.intervened.warnings {
        eprintln!("intervened warning: {warning}");
    }
    println!(
        "implied delta_p {:.6} (baseline sojourn {:.3}s, intervened {:.3}s)",
        artifacts.outcome.implied_delta_p,
        artifacts.outcome.baseline.total_mean_sojourn_seconds,
        artifacts.outcome.intervened.total_mean_sojourn_seconds
    );
    for file in &artifacts.files {
        println!("wrote {}", file.display());
    }
    Ok(())
}

fn discover(args: DiscoverArgs) -> Result<(), PipelineError> {
    let log = read_log(&args.log, false)?;
    let dfg = build_dfg(&log)?;
    let rendered = match args.format {
        GraphFormat::Json => dfg.to_json(),
        GraphFormat::Dot => dfg.to_dot(),
    };
    match args.output {
        Some(path) => std::fs::write(path, rendered)?,
        None => println!("{rendered}"),
    }
    Ok(())
}

fn validate(args: ValidateArgs) -> Result<(), PipelineError> {
    let log = read_log(&args.log, args.lenient)?;
    let report = validate_log(&log);
    if report.is_clean() {
        println!("clean: no findings");
    } else {
        for finding in &report.findings {
            println!("{finding}");
        }
    }
    Ok(())
}

fn read_log(path: &Path, lenient: bool) -> Result<prodmine::eventlog::EventLog, PipelineError> {
    let opts = IngestOptions {
        era_label: "unlabeled".to_string(),
        lenient,
    };
    read_log_file(path, &opts, None).map_err(|source| PipelineError::Ingest {
        era: path.display().to_string(),
        source,
    })
}
