use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use super::csv_input::{load_csv, LabelColumn};
use super::synthetic::BlobSpec;
use crate::ballgen::{granulate, BallGenConfig};
use crate::connect::{connect_kmeans, connect_overlap, kmeans_fit};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::fcm::{fcm_fit, hard_labels, FcmConfig};
use crate::metrics::{accuracy, ari, nmi, MetricsReport};
use crate::result::ClusteringResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    FgbOverlap,
    FgbKmeans,
    Fcm,
    Kmeans,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::FgbOverlap,
        Method::FgbKmeans,
        Method::Fcm,
        Method::Kmeans,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::FgbOverlap => "fgb-overlap",
            Method::FgbKmeans => "fgb-kmeans",
            Method::Fcm => "fcm",
            Method::Kmeans => "kmeans",
        }
    }

    pub fn needs_k(self) -> bool {
        self != Method::FgbOverlap
    }

    pub fn uses_balls(self) -> bool {
        matches!(self, Method::FgbOverlap | Method::FgbKmeans)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown method {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InputSource {
    Csv {
        path: PathBuf,
        label_column: Option<LabelColumn>,
        has_header: bool,
    },
    Synthetic(BlobSpec),
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct OutputPaths {
    pub labels: Option<PathBuf>,
    pub balls: Option<PathBuf>,
    pub metrics: Option<PathBuf>,
    /// Wall-clock timing, kept apart from the (reproducible) metrics file.
    pub timing: Option<PathBuf>,
}

/// Algorithm settings shared by every method.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodParams {
    pub method: Method,
    pub k: Option<usize>,
    pub seed: u64,
    /// Iteration cap for FCM (baseline and local splits) and K-means.
    pub max_iter: usize,
    pub tol: f64,
    pub fuzzifier: f64,
    /// Smallest ball that may still split. `None` picks [`auto_min_split_size`].
    pub min_split_size: Option<usize>,
    pub radius_factor: f64,
}

/// Size floor used when none is given: `max(3, ceil(sqrt(n)))`.
///
/// The distribution-measure test accepts nearly every split of a compact cloud, so a
/// fixed floor of 3 shatters the data into balls of one or two points.
pub fn auto_min_split_size(n: usize) -> usize {
    let mut s = (n as f64).sqrt() as usize;
    while s * s < n {
        s += 1;
    }
    s.max(BallGenConfig::default().min_split_size)
}

impl MethodParams {
    pub fn new(method: Method, k: Option<usize>, seed: u64) -> Self {
        let fcm = FcmConfig::default();
        Self {
            method,
            k,
            seed,
            max_iter: fcm.max_iter,
            tol: fcm.tol,
            fuzzifier: fcm.fuzzifier,
            min_split_size: None,
            radius_factor: BallGenConfig::default().radius_factor,
        }
    }

    pub fn fcm_config(&self) -> FcmConfig {
        FcmConfig {
            fuzzifier: self.fuzzifier,
            max_iter: self.max_iter,
            tol: self.tol,
            seed: self.seed,
        }
    }

    /// Ball generation settings for a dataset of `n` points.
    pub fn ballgen_config(&self, n: usize) -> BallGenConfig {
        BallGenConfig {
            min_split_size: self
                .min_split_size
                .unwrap_or_else(|| auto_min_split_size(n)),
            fcm: self.fcm_config(),
            radius_factor: self.radius_factor,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match (self.method.needs_k(), self.k) {
            (true, None) => {
                return Err(Error::Config(format!(
                    "--k is required for {}",
                    self.method
                )))
            }
            (false, Some(_)) => {
                return Err(Error::Config(format!(
                    "--k is not accepted for {}: the cluster count emerges from the ball graph",
                    self.method
                )))
            }
            (true, Some(0)) => return Err(Error::Config("--k must be at least 1".into())),
            _ => {}
        }
        // the automatic floor is always valid, so any n works for the check
        self.ballgen_config(1)
            .validate()
            .map_err(|e| Error::Config(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: InputSource,
    pub params: MethodParams,
    /// Min-max scale every feature to [0, 1] before clustering.
    pub scale: bool,
    pub outputs: OutputPaths,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.outputs.balls.is_some() && !self.params.method.uses_balls() {
            return Err(Error::Config(format!(
                "--output-balls is only available for granular-ball methods, not {}",
                self.params.method
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub dataset: Dataset,
    pub result: ClusteringResult,
    pub metrics: MetricsReport,
}

pub fn load_input(input: &InputSource, seed: u64) -> Result<Dataset> {
    match input {
        InputSource::Csv {
            path,
            label_column,
            has_header,
        } => load_csv(path, label_column.as_ref(), *has_header),
        InputSource::Synthetic(spec) => spec.generate(seed),
    }
}

/// Run one method on an in-memory dataset. `runtime_seconds` covers the whole method,
/// ball generation included.
pub fn cluster(dataset: &Dataset, params: &MethodParams) -> Result<ClusteringResult> {
    params.validate()?;
    let start = Instant::now();
    let mut result = match params.method {
        Method::FgbOverlap => {
            let gen = granulate(dataset, &params.ballgen_config(dataset.n()))?;
            connect_overlap(dataset, gen.balls)?
        }
        Method::FgbKmeans => {
            let gen = granulate(dataset, &params.ballgen_config(dataset.n()))?;
            let k = params.k.unwrap_or_default();
            connect_kmeans(dataset, gen.balls, k, params.seed, params.max_iter)?
        }
        Method::Fcm => {
            let k = params.k.unwrap_or_default();
            let fit = fcm_fit(dataset, k, &params.fcm_config(), None)?;
            ClusteringResult {
                point_labels: hard_labels(&fit.membership),
                ball_labels: None,
                balls: None,
                n_clusters: k,
                iterations: fit.iterations,
                runtime_seconds: 0.0,
            }
        }
        Method::Kmeans => {
            let k = params.k.unwrap_or_default();
            let fit = kmeans_fit(dataset, k, params.seed, params.max_iter)?;
            ClusteringResult {
                point_labels: fit.labels,
                ball_labels: None,
                balls: None,
                n_clusters: k,
                iterations: fit.iterations,
                runtime_seconds: 0.0,
            }
        }
    };
    // strictly positive even below timer resolution
    result.runtime_seconds = start.elapsed().as_secs_f64().max(f64::MIN_POSITIVE);
    Ok(result)
}

/// Score a clustering against the dataset's ground truth (if any).
pub fn score(
    dataset: &Dataset,
    result: &ClusteringResult,
    params: &MethodParams,
) -> Result<MetricsReport> {
    let (acc, nmi_v, ari_v) = match dataset.labels() {
        Some(truth) => (
            Some(accuracy(truth, &result.point_labels)?),
            Some(nmi(truth, &result.point_labels)?),
            Some(ari(truth, &result.point_labels)?),
        ),
        None => (None, None, None),
    };
    Ok(MetricsReport {
        acc,
        nmi: nmi_v,
        ari: ari_v,
        runtime_seconds: result.runtime_seconds,
        n_balls: result.n_balls(),
        n_clusters: result.n_clusters,
        method: params.method.to_string(),
        seed: params.seed,
    })
}

/// Load, cluster, score, and write every requested output.
pub fn run(config: &RunConfig) -> Result<RunOutcome> {
    config.validate()?;
    let mut dataset = load_input(&config.input, config.params.seed)?;
    if config.scale {
        dataset = dataset.min_max_scaled();
    }
    let result = cluster(&dataset, &config.params)?;
    let metrics = score(&dataset, &result, &config.params)?;

    let out = &config.outputs;
    if let Some(path) = &out.labels {
        write_labels(path, &result.point_labels)?;
    }
    if let Some(path) = &out.balls {
        write_balls(path, &result)?;
    }
    if let Some(path) = &out.metrics {
        write_metrics(path, &metrics)?;
    }
    if let Some(path) = &out.timing {
        write_timing(path, &metrics)?;
    }
    Ok(RunOutcome {
        dataset,
        result,
        metrics,
    })
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::Data(format!("cannot create {}: {e}", path.display())))
}

/// Single-column CSV, one label per input row, in input order.
pub fn write_labels(path: &Path, labels: &[usize]) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "label")?;
    for l in labels {
        writeln!(w, "{l}")?;
    }
    w.flush()?;
    Ok(())
}

/// Ball inventory: `ball_id,size,radius,dm,label,c_0..c_{d-1}`.
pub fn write_balls(path: &Path, result: &ClusteringResult) -> Result<()> {
    let (Some(balls), Some(labels)) = (&result.balls, &result.ball_labels) else {
        return Err(Error::Config(
            "this method produces no granular-balls".into(),
        ));
    };
    let d = balls.first().map(|b| b.center().len()).unwrap_or(0);
    let mut w = create(path)?;
    write!(w, "ball_id,size,radius,dm,label")?;
    for j in 0..d {
        write!(w, ",c_{j}")?;
    }
    writeln!(w)?;
    for (id, (ball, label)) in balls.iter().zip(labels).enumerate() {
        write!(
            w,
            "{id},{},{},{},{label}",
            ball.size(),
            ball.radius(),
            ball.dm()
        )?;
        for c in ball.center() {
            write!(w, ",{c}")?;
        }
        writeln!(w)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_metrics(path: &Path, metrics: &MetricsReport) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, metrics)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct Timing<'a> {
    method: &'a str,
    seed: u64,
    runtime_seconds: f64,
}

pub fn write_timing(path: &Path, metrics: &MetricsReport) -> Result<()> {
    let mut w = create(path)?;
    let t = Timing {
        method: &metrics.method,
        seed: metrics.seed,
        runtime_seconds: metrics.runtime_seconds,
    };
    serde_json::to_writer_pretty(&mut w, &t)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}
