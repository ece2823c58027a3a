use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fgb_core::harness::OutputPaths;
use fgb_core::{BlobSpec, Error, InputSource, LabelColumn, Method, MethodParams, RunConfig};

/// Granular-ball clustering benchmark tool.
#[derive(Debug, Parser)]
#[command(name = "fgb", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Cluster one dataset with one method and write labels, balls and metrics.
    Fit(FitArgs),
}

#[derive(Debug, Args)]
struct FitArgs {
    /// Input CSV file.
    #[arg(
        long,
        conflicts_with = "synthetic",
        required_unless_present = "synthetic"
    )]
    input: Option<PathBuf>,

    /// Synthetic source, e.g. `blobs:n=600,k=3,d=2,spread=0.5`.
    #[arg(long)]
    synthetic: Option<String>,

    /// fgb-overlap, fgb-kmeans, fcm or kmeans.
    #[arg(long)]
    method: String,

    #[arg(long)]
    k: Option<usize>,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    #[arg(long)]
    max_iter: Option<usize>,

    #[arg(long)]
    tol: Option<f64>,

    #[arg(long)]
    fuzzifier: Option<f64>,

    #[arg(long)]
    min_split_size: Option<usize>,

    #[arg(long)]
    radius_factor: Option<f64>,

    /// Ground-truth column: a header name or `last`.
    #[arg(long)]
    label_column: Option<String>,

    /// The input file has no header row.
    #[arg(long)]
    no_header: bool,

    /// Min-max scale every feature to [0, 1] before clustering.
    #[arg(long)]
    scale: bool,

    #[arg(long)]
    output_labels: Option<PathBuf>,

    #[arg(long)]
    output_balls: Option<PathBuf>,

    #[arg(long)]
    output_metrics: Option<PathBuf>,

    /// JSON file receiving the wall time of the run.
    #[arg(long)]
    output_timing: Option<PathBuf>,
}

impl FitArgs {
    fn into_config(self) -> Result<RunConfig, Error> {
        let method: Method = self.method.parse()?;
        let input = match (self.input, self.synthetic) {
            (Some(path), None) => {
                let label_column = self.label_column.map(|s| match s.parse::<LabelColumn>() {
                    Ok(c) => c,
                    Err(never) => match never {},
                });
                InputSource::Csv {
                    path,
                    label_column,
                    has_header: !self.no_header,
                }
            }
            (None, Some(spec)) => {
                if self.label_column.is_some() || self.no_header {
                    return Err(Error::Config(
                        "--label-column and --no-header apply only to --input".into(),
                    ));
                }
                InputSource::Synthetic(BlobSpec::parse(&spec)?)
            }
            _ => {
                return Err(Error::Config(
                    "exactly one of --input or --synthetic is required".into(),
                ))
            }
        };

        let mut params = MethodParams::new(method, self.k, self.seed);
        if let Some(v) = self.max_iter {
            params.max_iter = v;
        }
        if let Some(v) = self.tol {
            params.tol = v;
        }
        if let Some(v) = self.fuzzifier {
            params.fuzzifier = v;
        }
        if let Some(v) = self.min_split_size {
            params.min_split_size = Some(v);
        }
        if let Some(v) = self.radius_factor {
            params.radius_factor = v;
        }

        Ok(RunConfig {
            input,
            params,
            scale: self.scale,
            outputs: OutputPaths {
                labels: self.output_labels,
                balls: self.output_balls,
                metrics: self.output_metrics,
                timing: self.output_timing,
            },
        })
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Config(_) => 2,
        Error::Parse { .. } | Error::Data(_) | Error::Io(_) | Error::Csv(_) | Error::Json(_) => 3,
        Error::InvalidArgument(_)
        | Error::DimensionMismatch { .. }
        | Error::DegenerateCluster { .. }
        | Error::KExceedsBalls { .. } => 4,
    }
}

fn fmt_score(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |x| format!("{x:.4}"))
}

fn fit(args: FitArgs) -> Result<(), Error> {
    let config = args.into_config()?;
    let outcome = fgb_core::run(&config)?;
    let m = &outcome.metrics;
    let balls = m
        .n_balls
        .map_or_else(String::new, |b| format!(" balls={b}"));
    eprintln!(
        "{} n={} d={} clusters={}{balls} acc={} nmi={} ari={} time={:.4}s",
        m.method,
        outcome.dataset.n(),
        outcome.dataset.d(),
        m.n_clusters,
        fmt_score(m.acc),
        fmt_score(m.nmi),
        fmt_score(m.ari),
        m.runtime_seconds,
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Fit(args) => fit(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
