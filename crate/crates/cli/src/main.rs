//! Command-line front end: analyse a survivor subsystem, sweep the scaled
//! mass sequence to CSV, or run the verification checks.

mod error;
mod model_file;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thermoshift::subsystem::analyze;
use thermoshift::transfer::{build_transfer, equilibrium_of, normalize};
use thermoshift::{Potential, Tolerances};

use error::CliError;
use model_file::ModelFile;
use output::{analysis_body, sequence_csv, to_json, AnalysisDoc, SequenceBody};

#[derive(Parser)]
#[command(
    name = "thermoshift",
    version,
    about = "Survivor-set asymptotics for subshifts of finite type with locally constant potentials"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Analyse the sub-alphabet system and emit the JSON analysis document
    Analyze(AnalyzeArgs),
    /// Sweep n = 0..N and emit the CSV report with its JSON companion
    Sequence(SequenceArgs),
    /// Run the verification checks and print one line per check
    Verify(VerifyArgs),
}

#[derive(Args)]
struct ModelSource {
    /// Model file, or an analysis document emitted by this tool
    #[arg(long, value_name = "PATH", conflicts_with = "example")]
    model: Option<PathBuf>,
    /// Built-in example name (currently: paper4)
    #[arg(long, value_name = "NAME")]
    example: Option<String>,
    /// First cylinder weight of the built-in example
    #[arg(long, default_value_t = 0.2, value_name = "X")]
    ep: f64,
    /// Second cylinder weight of the built-in example
    #[arg(long, default_value_t = 0.3, value_name = "Y")]
    eq: f64,
    /// Override the sub-alphabet (comma-separated symbol labels)
    #[arg(long, value_delimiter = ',', value_name = "LABELS")]
    delta: Option<Vec<String>>,
}

impl ModelSource {
    fn load(&self) -> Result<ModelFile, CliError> {
        let mut file = match (&self.model, &self.example) {
            (Some(path), None) => ModelFile::load(path)?,
            (None, Some(name)) => model_file::builtin(name, self.ep, self.eq, self.delta.clone())?,
            (None, None) => return Err(CliError::parse("pass --model PATH or --example NAME")),
            (Some(_), Some(_)) => unreachable!("clap rejects the combination"),
        };
        if let Some(delta) = &self.delta {
            file.delta = delta.clone();
        }
        Ok(file)
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    source: ModelSource,
    /// Write the document here instead of standard output
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Accepted column-sum deviation for an already-normalised table
    #[arg(long, value_name = "T")]
    tol: Option<f64>,
}

#[derive(Args)]
struct SequenceArgs {
    #[command(flatten)]
    source: ModelSource,
    /// Largest n in the sweep
    #[arg(long, default_value_t = 40, value_name = "N")]
    nmax: usize,
    /// Spread below which the residue limits count as one limit
    #[arg(long, default_value_t = 1e-6, value_name = "T")]
    tol: f64,
    /// Write the report here (CSV gains a .json companion)
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// What to print on standard output
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    source: ModelSource,
    /// Residual accepted by every check
    #[arg(long, default_value_t = 1e-9, value_name = "T")]
    tol: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

pub(crate) struct Prepared {
    file: ModelFile,
    potential: Potential,
    delta: Vec<usize>,
}

/// Load, resolve and (when requested) normalise; the returned file is the
/// canonical spelled-out form that reproduces the run byte for byte.
pub(crate) fn prepare(
    source: &ModelSource,
    tols: &Tolerances,
    enforce_normalized: bool,
) -> Result<Prepared, CliError> {
    let file = source.load()?;
    let (model, potential, delta) = file.to_core()?;
    let potential = if file.normalize {
        normalize(&potential, tols)
            .map_err(|e| CliError::precondition(format!("normalisation failed: {e}")))?
    } else {
        potential
    };
    if enforce_normalized {
        let transfer =
            build_transfer(&potential).map_err(|e| CliError::precondition(e.to_string()))?;
        let deviation = transfer.normalization_deviation();
        if deviation > tols.normalized_tol {
            return Err(CliError::precondition(format!(
                "potential is not normalised (worst column-sum deviation {deviation:.3e}); \
                 set \"normalize\": true in the model file"
            )));
        }
    }
    let canonical = ModelFile::from_core(&model, &potential, &delta);
    Ok(Prepared {
        file: canonical,
        potential,
        delta,
    })
}

fn write_out(text: &str, out: &Option<PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::parse(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

fn positive_tol(tol: f64) -> Result<(), CliError> {
    if tol > 0.0 {
        Ok(())
    } else {
        Err(CliError::precondition(
            "tolerance must be strictly positive; pass a positive --tol",
        ))
    }
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<(), CliError> {
    let mut tols = Tolerances::default();
    if let Some(tol) = args.tol {
        positive_tol(tol)?;
        tols.normalized_tol = tol;
    }
    let prep = prepare(&args.source, &tols, true)?;
    let analysis = analyze(&prep.potential, &prep.delta, &tols)
        .map_err(|e| CliError::precondition(e.to_string()))?;
    let measure = equilibrium_of(&prep.potential, &tols)
        .map_err(|e| CliError::precondition(e.to_string()))?;
    let doc = AnalysisDoc {
        model: prep.file,
        analysis: analysis_body(&analysis, &measure),
        sequence: None,
    };
    write_out(&(to_json(&doc) + "\n"), &args.out)
}

fn cmd_sequence(args: &SequenceArgs) -> Result<(), CliError> {
    positive_tol(args.tol)?;
    let tols = Tolerances::default();
    let prep = prepare(&args.source, &tols, true)?;
    let analysis = analyze(&prep.potential, &prep.delta, &tols)
        .map_err(|e| CliError::precondition(e.to_string()))?;
    let measure = equilibrium_of(&prep.potential, &tols)
        .map_err(|e| CliError::precondition(e.to_string()))?;
    let report = thermoshift::asymptotics::report(&analysis, &measure, args.nmax, args.tol)
        .map_err(|e| CliError::precondition(e.to_string()))?;
    let csv = sequence_csv(&report);
    let doc = AnalysisDoc {
        model: prep.file,
        analysis: analysis_body(&analysis, &measure),
        sequence: Some(SequenceBody {
            n_max: report.n_max,
            tol: args.tol,
            spread: report.spread,
            converges_overall: report.converges_overall,
        }),
    };
    let json = to_json(&doc) + "\n";
    match (&args.out, args.format) {
        (Some(path), OutputFormat::Csv) => {
            write_out(&csv, &args.out)?;
            let companion = path.with_extension("json");
            std::fs::write(&companion, &json)
                .map_err(|e| CliError::parse(format!("cannot write {}: {e}", companion.display())))
        }
        (Some(_), OutputFormat::Json) => write_out(&json, &args.out),
        (None, OutputFormat::Csv) => write_out(&csv, &None),
        (None, OutputFormat::Json) => write_out(&json, &None),
    }
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), CliError> {
    positive_tol(args.tol)?;
    let tols = Tolerances::default();
    let prep = prepare(&args.source, &tols, false)?;
    verify::run(&prep, args.tol, &tols)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Analyze(args) => cmd_analyze(args),
        Cmd::Sequence(args) => cmd_sequence(args),
        Cmd::Verify(args) => cmd_verify(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
