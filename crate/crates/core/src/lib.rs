//! Local fuzzy granular-ball clustering.
//!
//! A dataset is recursively split into fuzzy granular-balls by two-cluster local FCM
//! runs, accepting a split only when it lowers the size-weighted distribution measure.
//! Oversized balls are then split until the radii are homogeneous, and the balls are
//! connected into final clusters either by K-means over their centers or by an
//! adaptive overlap rule whose cluster count is emergent.
//!
//! ```
//! use fgb_core::{cluster, make_blobs, Method, MethodParams};
//!
//! let data = make_blobs(50, 3, 2, 0.5, 7).unwrap();
//! let result = cluster(&data, &MethodParams::new(Method::FgbOverlap, None, 0)).unwrap();
//! assert_eq!(result.point_labels.len(), 150);
//! ```

pub mod ball;
pub mod ballgen;
pub mod connect;
pub mod dataset;
pub mod error;
pub mod fcm;
pub mod harness;
pub mod membership;
pub mod metrics;
mod result;

pub use ball::{ball_stats, farthest_point, FuzzyGranularBall};
pub use ballgen::{
    generate_balls, granulate, initial_split_centers, normalize_radii, try_split, BallGenConfig,
    BallGeneration, SplitCandidate, SplitRecord,
};
pub use connect::{
    adjacency_threshold, adjacent, connect_kmeans, connect_overlap, kmeans_fit, OverlapGraph,
};
pub use dataset::{distance, Dataset};
pub use error::{Error, Result};
pub use fcm::{
    fcm_fit, hard_labels, objective, update_centers, update_membership, CenterSet, FcmConfig,
    FcmFit,
};
pub use harness::{
    auto_min_split_size, cluster, load_csv, make_blobs, run, BlobSpec, InputSource, LabelColumn,
    Method, MethodParams, RunConfig,
};
pub use membership::MembershipMatrix;
pub use metrics::{accuracy, ari, contingency, nmi, ContingencyTable, MetricsReport};
pub use result::ClusteringResult;
