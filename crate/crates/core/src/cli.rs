//! Command-line front end.
//!
//! Exit codes: 0 success, 2 shape mismatch, 3 IO/format error, 4 metric
//! undefined under `--policy error`, 5 bad flags or unknown metric.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::Parser;
use rayon::prelude::*;

use crate::distance::{HausdorffAlgo, Spacing};
use crate::error::Error;
use crate::evaluator::{EvalOptions, ModeRequest, Registry, BUILTIN_METRICS};
use crate::io::load_mask;
use crate::mask::validate_pair;
use crate::overlap::ZeroDivisionPolicy;
use crate::report::{MetricReport, ReportDocument, ReportFormat};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SHAPE_MISMATCH: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_UNDEFINED: i32 = 4;
pub const EXIT_USAGE: i32 = 5;

fn parse_format(s: &str) -> Result<ReportFormat, String> {
    match s {
        "json" => Ok(ReportFormat::Json),
        "csv" => Ok(ReportFormat::Csv),
        other => Err(format!("unknown format `{other}` (expected json or csv)")),
    }
}

/// `--spacing` components in flag order (x first).
#[derive(Debug, Clone, PartialEq)]
pub struct SpacingArg(pub Vec<f64>);

fn parse_spacing(s: &str) -> Result<SpacingArg, String> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| format!("invalid spacing component `{p}`"))
        })
        .collect::<Result<_, _>>()
        .map(SpacingArg)
}

/// Score a ground-truth mask against a prediction.
#[derive(Debug, Parser)]
#[command(name = "segeval", version, about)]
pub struct Args {
    /// Ground-truth mask (PGM, or raw volume sidecar `.json` / `.raw`)
    #[arg(long)]
    pub truth: PathBuf,

    /// Predicted mask, same formats as --truth
    #[arg(long)]
    pub pred: PathBuf,

    /// Comma-separated metric names or aliases, or `all`
    #[arg(long, default_value = "all")]
    pub metrics: String,

    /// auto | binary | multiclass
    #[arg(long, default_value = "auto", value_parser = |s: &str| s.parse::<ModeRequest>())]
    pub mode: ModeRequest,

    /// perfect-empty | zero | one | error
    #[arg(long, default_value = "perfect-empty", value_parser = |s: &str| s.parse::<ZeroDivisionPolicy>())]
    pub policy: ZeroDivisionPolicy,

    /// Physical cell size as x,y[,z] (fastest-varying axis first)
    #[arg(long, value_parser = parse_spacing)]
    pub spacing: Option<SpacingArg>,

    /// naive | edt
    #[arg(long = "hd-algo", default_value = "edt", value_parser = |s: &str| s.parse::<HausdorffAlgo>())]
    pub hd_algo: HausdorffAlgo,

    /// json | csv
    #[arg(long, default_value = "json", value_parser = parse_format)]
    pub format: ReportFormat,

    /// Write the report here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Score class 0 in multi-class mode
    #[arg(long = "include-background", default_value = "true", action = clap::ArgAction::Set)]
    pub include_background: bool,

    /// Omit wall-time fields so reports are byte-comparable
    #[arg(long = "no-timings")]
    pub no_timings: bool,
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::ShapeMismatch { .. } => EXIT_SHAPE_MISMATCH,
        Error::MetricUndefined { .. } => EXIT_UNDEFINED,
        Error::UnknownMetric(_) | Error::DuplicateName(_) | Error::SpacingInvalid { .. } => {
            EXIT_USAGE
        }
        _ => EXIT_IO,
    }
}

/// Resolves the `--metrics` list to sorted, deduplicated canonical names.
pub fn resolve_metrics(registry: &Registry, list: &str) -> Result<Vec<String>, Error> {
    if list.trim() == "all" {
        return Ok(BUILTIN_METRICS.iter().map(|s| s.to_string()).collect());
    }
    let mut names = Vec::new();
    for part in list.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        names.push(registry.resolve(part)?.name.clone());
    }
    if names.is_empty() {
        return Err(Error::UnknownMetric(list.to_string()));
    }
    names.sort();
    names.dedup();
    Ok(names)
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&args, stdout) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "segeval: {e}");
            exit_code(&e)
        }
    }
}

fn execute(args: &Args, stdout: &mut dyn Write) -> Result<(), Error> {
    let registry = Registry::with_builtins();
    let metrics = resolve_metrics(&registry, &args.metrics)?;

    let truth = load_mask(&args.truth)?;
    let pred = load_mask(&args.pred)?;
    validate_pair(&truth, &pred)?;

    let spacing = match &args.spacing {
        // flag order is x,y[,z]; shape order is [.., y, x]
        Some(SpacingArg(xyz)) => {
            if xyz.len() != truth.rank() {
                return Err(Error::SpacingInvalid {
                    spacing: xyz.clone(),
                    rank: truth.rank(),
                });
            }
            Spacing::new(xyz.iter().rev().copied().collect())?
        }
        None => Spacing::unit(truth.rank()),
    };
    let options = EvalOptions {
        mode: args.mode,
        policy: args.policy,
        spacing: Some(spacing.clone()),
        hd_algo: args.hd_algo,
        exclude_background: !args.include_background,
    };

    let reports = metrics
        .par_iter()
        .map(|name| {
            let start = Instant::now();
            let result = registry.evaluate(&truth, &pred, name, &options)?;
            let ms = start.elapsed().as_secs_f64() * 1e3;
            Ok(MetricReport {
                result,
                wall_time_ms: (!args.no_timings).then_some(ms),
            })
        })
        .collect::<Vec<Result<MetricReport, Error>>>()
        .into_iter()
        .collect::<Result<Vec<_>, Error>>()?;

    // resolve_metrics never returns an empty list
    let mode = reports[0].result.mode;
    let classes = reports[0].result.classes.clone();

    let doc = ReportDocument {
        version: env!("CARGO_PKG_VERSION").to_string(),
        truth_path: args.truth.display().to_string(),
        pred_path: args.pred.display().to_string(),
        shape: truth.shape().to_vec(),
        mode,
        policy: args.policy,
        spacing,
        hd_algo: args.hd_algo,
        include_background: args.include_background,
        classes,
        metrics: reports,
    };
    let text = doc.render(args.format)?;
    match &args.out {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}
