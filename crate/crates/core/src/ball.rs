//! Fuzzy granular-balls and their geometric statistics.

use crate::dataset::{euclidean, Dataset};
use crate::error::{Error, Result};

/// A group of points summarised by its gravity center, max-distance radius and
/// distribution measure (mean member distance to the center).
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyGranularBall {
    members: Vec<usize>,
    center: Vec<f64>,
    radius: f64,
    sum_dist: f64,
    dm: f64,
}

impl FuzzyGranularBall {
    /// Member point indices, sorted ascending.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn sum_dist(&self) -> f64 {
        self.sum_dist
    }

    /// Distribution measure: `sum_dist / size`.
    pub fn dm(&self) -> f64 {
        self.dm
    }
}

/// Compute center (unweighted mean), radius, summed distance and DM for a member set.
///
/// The result does not depend on the order of `member_indices`.
pub fn ball_stats(dataset: &Dataset, member_indices: &[usize]) -> Result<FuzzyGranularBall> {
    if member_indices.is_empty() {
        return Err(Error::invalid("granular-ball member set is empty"));
    }
    let mut members = member_indices.to_vec();
    members.sort_unstable();
    if members.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::invalid(
            "granular-ball member set contains duplicate indices",
        ));
    }
    if let Some(&bad) = members.last().filter(|&&i| i >= dataset.n()) {
        return Err(Error::invalid(format!(
            "point index {bad} out of range (n = {})",
            dataset.n()
        )));
    }

    let d = dataset.d();
    let mut center = vec![0.0; d];
    for &i in &members {
        for (c, &x) in center.iter_mut().zip(dataset.point(i)) {
            *c += x;
        }
    }
    let size = members.len() as f64;
    center.iter_mut().for_each(|c| *c /= size);

    let (mut radius, mut sum_dist) = (0.0f64, 0.0f64);
    for &i in &members {
        let dist = euclidean(dataset.point(i), &center);
        radius = radius.max(dist);
        sum_dist += dist;
    }
    let dm = if members.len() == 1 {
        0.0
    } else {
        sum_dist / size
    };
    let sum_dist = if members.len() == 1 { 0.0 } else { sum_dist };

    Ok(FuzzyGranularBall {
        members,
        center,
        radius,
        sum_dist,
        dm,
    })
}

/// Member farthest from `from`; ties go to the smallest point index.
pub fn farthest_point(dataset: &Dataset, member_indices: &[usize], from: &[f64]) -> Result<usize> {
    if from.len() != dataset.d() {
        return Err(Error::DimensionMismatch {
            expected: dataset.d(),
            got: from.len(),
        });
    }
    let mut best: Option<(usize, f64)> = None;
    for &i in member_indices {
        if i >= dataset.n() {
            return Err(Error::invalid(format!(
                "point index {i} out of range (n = {})",
                dataset.n()
            )));
        }
        let dist = euclidean(dataset.point(i), from);
        best = match best {
            Some((bi, bd)) if bd > dist || (bd == dist && bi < i) => Some((bi, bd)),
            _ => Some((i, dist)),
        };
    }
    best.map(|(i, _)| i)
        .ok_or_else(|| Error::invalid("farthest_point on an empty member set"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ds(rows: &[[f64; 2]]) -> Dataset {
        Dataset::from_rows(rows, None).unwrap()
    }

    #[test]
    fn stats_two_points() {
        let b = ball_stats(&ds(&[[0.0, 0.0], [2.0, 0.0]]), &[0, 1]).unwrap();
        assert_eq!(b.center(), &[1.0, 0.0]);
        assert_eq!(b.radius(), 1.0);
        assert_eq!(b.sum_dist(), 2.0);
        assert_eq!(b.dm(), 1.0);
        assert_eq!(b.size(), 2);
    }

    #[test]
    fn stats_singleton() {
        let b = ball_stats(&ds(&[[5.0, 5.0]]), &[0]).unwrap();
        assert_eq!(b.center(), &[5.0, 5.0]);
        assert_eq!(b.radius(), 0.0);
        assert_eq!(b.dm(), 0.0);
        assert_eq!(b.sum_dist(), 0.0);
    }

    #[test]
    fn stats_three_collinear() {
        let b = ball_stats(&ds(&[[-1.0, 0.0], [0.0, 0.0], [1.0, 0.0]]), &[2, 0, 1]).unwrap();
        assert_eq!(b.center(), &[0.0, 0.0]);
        assert_eq!(b.radius(), 1.0);
        assert_eq!(b.sum_dist(), 2.0);
        assert!((b.dm() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(b.members(), &[0, 1, 2]);
    }

    #[test]
    fn stats_errors() {
        let data = ds(&[[0.0, 0.0]]);
        assert!(ball_stats(&data, &[]).is_err());
        assert!(ball_stats(&data, &[1]).is_err());
        assert!(ball_stats(&ds(&[[0.0, 0.0], [1.0, 1.0]]), &[1, 1]).is_err());
    }

    #[test]
    fn farthest_examples() {
        let data = ds(&[[0.0, 0.0], [3.0, 0.0], [1.0, 0.0]]);
        assert_eq!(farthest_point(&data, &[0, 1, 2], &[0.0, 0.0]).unwrap(), 1);

        let tie = ds(&[[1.0, 0.0], [-1.0, 0.0]]);
        assert_eq!(farthest_point(&tie, &[1, 0], &[0.0, 0.0]).unwrap(), 0);
        assert_eq!(farthest_point(&tie, &[0, 1], &[0.0, 0.0]).unwrap(), 0);

        assert_eq!(farthest_point(&data, &[2], &[100.0, 100.0]).unwrap(), 2);
        assert!(farthest_point(&data, &[], &[0.0, 0.0]).is_err());
    }

    fn cloud() -> impl Strategy<Value = Vec<[f64; 2]>> {
        prop::collection::vec(prop::array::uniform2(-50.0..50.0f64), 1..40)
    }

    proptest! {
        #[test]
        fn dm_bounded_by_radius(rows in cloud()) {
            let data = ds(&rows);
            let idx: Vec<usize> = (0..data.n()).collect();
            let b = ball_stats(&data, &idx).unwrap();
            prop_assert!(b.dm() >= 0.0);
            prop_assert!(b.dm() <= b.radius() + 1e-12);
        }

        #[test]
        fn permutation_invariant(rows in cloud(), seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let data = ds(&rows);
            let idx: Vec<usize> = (0..data.n()).collect();
            let mut shuffled = idx.clone();
            shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            prop_assert_eq!(ball_stats(&data, &idx).unwrap(), ball_stats(&data, &shuffled).unwrap());
        }
    }
}
