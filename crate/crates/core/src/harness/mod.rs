//! Benchmark pipeline: data ingestion, synthetic generators, method dispatch, timing
//! and report emission.

mod csv_input;
mod run;
mod synthetic;

pub use csv_input::{load_csv, LabelColumn};
pub use run::{
    auto_min_split_size, cluster, load_input, run, score, write_balls, write_labels, write_metrics,
    write_timing, InputSource, Method, MethodParams, OutputPaths, RunConfig, RunOutcome,
};
pub use synthetic::{make_blobs, BlobSpec, CENTER_SEPARATION};
