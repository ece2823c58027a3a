//! Lloyd's K-means with seeded distinct-point initialization.

use crate::ball::FuzzyGranularBall;
use crate::dataset::{squared_euclidean, Dataset};
use crate::error::{Error, Result};
use crate::fcm::{sample_centers, CenterSet};
use crate::result::ClusteringResult;

#[derive(Debug, Clone)]
pub struct KMeansFit {
    pub labels: Vec<usize>,
    pub centers: CenterSet,
    pub iterations: usize,
}

fn nearest(p: &[f64], centers: &[f64], d: usize) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (i, c) in centers.chunks_exact(d).enumerate() {
        let s = squared_euclidean(p, c);
        if s < best.1 {
            best = (i, s);
        }
    }
    best
}

/// Cluster `points` into `k` groups.
///
/// Iterates assignment and mean steps until assignments stop changing or `max_iter`
/// rounds have run. A cluster left empty is reseeded at the point lying farthest from
/// its own assigned center.
pub fn kmeans_fit(points: &Dataset, k: usize, seed: u64, max_iter: usize) -> Result<KMeansFit> {
    let m = points.n();
    if k == 0 || k > m {
        return Err(Error::invalid(format!("k = {k} must be in 1..={m}")));
    }
    if max_iter == 0 {
        return Err(Error::invalid("max_iter must be at least 1"));
    }
    let d = points.d();
    let init = sample_centers(points, k, seed)?;
    let mut centers: Vec<f64> = init.iter().flatten().copied().collect();
    let mut labels = vec![usize::MAX; m];
    let mut dist = vec![0.0; m];
    let mut iterations = 0;

    while iterations < max_iter {
        iterations += 1;
        let mut changed = false;
        for (j, p) in points.points().enumerate() {
            let (label, s) = nearest(p, &centers, d);
            dist[j] = s;
            if labels[j] != label {
                labels[j] = label;
                changed = true;
            }
        }
        if !changed {
            break;
        }

        let mut sums = vec![0.0; k * d];
        let mut counts = vec![0usize; k];
        for (j, p) in points.points().enumerate() {
            let l = labels[j];
            counts[l] += 1;
            for (acc, &x) in sums[l * d..(l + 1) * d].iter_mut().zip(p) {
                *acc += x;
            }
        }
        for cluster in 0..k {
            let slot = &mut centers[cluster * d..(cluster + 1) * d];
            if counts[cluster] > 0 {
                let n = counts[cluster] as f64;
                for (c, s) in slot.iter_mut().zip(&sums[cluster * d..(cluster + 1) * d]) {
                    *c = s / n;
                }
                continue;
            }
            // farthest point from its own center; strict '>' keeps the smallest index on ties
            let far = (0..m).fold(0, |best, j| if dist[j] > dist[best] { j } else { best });
            slot.copy_from_slice(points.point(far));
            dist[far] = -1.0;
        }
    }

    Ok(KMeansFit {
        labels,
        centers: CenterSet::new(centers, d)?,
        iterations,
    })
}

/// Cluster ball centers with K-means; every point inherits its ball's label.
pub fn connect_kmeans(
    dataset: &Dataset,
    balls: Vec<FuzzyGranularBall>,
    k: usize,
    seed: u64,
    max_iter: usize,
) -> Result<ClusteringResult> {
    if balls.is_empty() {
        return Err(Error::invalid("no granular-balls to connect"));
    }
    if k > balls.len() {
        return Err(Error::KExceedsBalls {
            k,
            balls: balls.len(),
        });
    }
    let centers: Vec<&[f64]> = balls.iter().map(FuzzyGranularBall::center).collect();
    let center_data = Dataset::from_rows(&centers, None)?;
    let fit = kmeans_fit(&center_data, k, seed, max_iter)?;
    Ok(ClusteringResult::from_balls(
        dataset.n(),
        balls,
        fit.labels,
        k,
        fit.iterations,
    ))
}
