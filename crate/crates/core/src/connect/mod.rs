//! Turning a granular-ball set into final clusters.

mod kmeans;
mod overlap;

pub use kmeans::{connect_kmeans, kmeans_fit, KMeansFit};
pub use overlap::{adjacency_threshold, adjacent, connect_overlap, surface_gap, OverlapGraph};
