//! Fuzzy granular-ball generation.
//!
//! Starting from the whole dataset as one ball, every pending ball is split in two by
//! a local two-cluster FCM run seeded from the ball's own geometry. A split is kept
//! only when the size-weighted distribution measure of the children is strictly below
//! the parent's. Afterwards, balls whose radius is far above the typical radius are
//! split unconditionally until none remain.

use std::collections::VecDeque;

use crate::ball::{ball_stats, farthest_point, FuzzyGranularBall};
use crate::dataset::{squared_euclidean, Dataset};
use crate::error::{Error, Result};
use crate::fcm::{fcm_fit, hard_labels, CenterSet, FcmConfig};
use crate::membership::MembershipMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct BallGenConfig {
    /// Balls smaller than this are never split.
    pub min_split_size: usize,
    /// Local two-cluster FCM settings.
    pub fcm: FcmConfig,
    /// A ball is oversize when `radius >= radius_factor * max(mean radius, median radius)`.
    pub radius_factor: f64,
}

impl Default for BallGenConfig {
    fn default() -> Self {
        Self {
            min_split_size: 3,
            fcm: FcmConfig::default(),
            radius_factor: 2.0,
        }
    }
}

impl BallGenConfig {
    pub fn validate(&self) -> Result<()> {
        if self.min_split_size < 2 {
            return Err(Error::invalid(format!(
                "min_split_size must be >= 2, got {}",
                self.min_split_size
            )));
        }
        if !(self.radius_factor.is_finite() && self.radius_factor > 0.0) {
            return Err(Error::invalid(format!(
                "radius_factor must be > 0, got {}",
                self.radius_factor
            )));
        }
        self.fcm.validate()
    }
}

/// An accepted two-way split of one ball.
#[derive(Debug, Clone)]
pub struct SplitCandidate {
    pub parent: FuzzyGranularBall,
    pub child1: FuzzyGranularBall,
    pub child2: FuzzyGranularBall,
    pub dm_parent: f64,
    /// `(n1/n)·DM1 + (n2/n)·DM2`
    pub dm_weight: f64,
    /// Local memberships, one row per parent member (in `parent.members()` order).
    pub local_membership: MembershipMatrix,
    pub local_centers: CenterSet,
}

/// Member sets of a split, kept for auditing.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitRecord {
    pub parent: Vec<usize>,
    pub child1: Vec<usize>,
    pub child2: Vec<usize>,
    pub dm_parent: f64,
    pub dm_weight: f64,
}

impl From<&SplitCandidate> for SplitRecord {
    fn from(s: &SplitCandidate) -> Self {
        Self {
            parent: s.parent.members().to_vec(),
            child1: s.child1.members().to_vec(),
            child2: s.child2.members().to_vec(),
            dm_parent: s.dm_parent,
            dm_weight: s.dm_weight,
        }
    }
}

/// Final ball set plus the history that produced it.
#[derive(Debug, Clone)]
pub struct BallGeneration {
    pub balls: Vec<FuzzyGranularBall>,
    /// Splits accepted by the distribution-measure test.
    pub splits: Vec<SplitRecord>,
    /// Unconditional splits made during radius normalization.
    pub forced_splits: Vec<SplitRecord>,
}

struct Seeds {
    centers: CenterSet,
    p1: usize,
    p2: usize,
}

fn seed_points(dataset: &Dataset, ball: &FuzzyGranularBall) -> Result<Seeds> {
    if ball.size() < 2 {
        return Err(Error::invalid(
            "initial split centers need a ball with at least 2 members",
        ));
    }
    let c = ball.center();
    let p1 = farthest_point(dataset, ball.members(), c)?;
    let p2 = farthest_point(dataset, ball.members(), dataset.point(p1))?;
    let mid = |p: usize| -> Vec<f64> {
        c.iter()
            .zip(dataset.point(p))
            .map(|(a, b)| 0.5 * (a + b))
            .collect()
    };
    let centers = CenterSet::from_rows(&[mid(p1), mid(p2)])?;
    Ok(Seeds { centers, p1, p2 })
}

/// Two starting centers for a local split: the midpoints between the ball center and
/// `p1` (member farthest from the center) and `p2` (member farthest from `p1`).
pub fn initial_split_centers(dataset: &Dataset, ball: &FuzzyGranularBall) -> Result<CenterSet> {
    seed_points(dataset, ball).map(|s| s.centers)
}

struct LocalSplit {
    membership: MembershipMatrix,
    centers: CenterSet,
    left: Vec<usize>,
    right: Vec<usize>,
}

/// Run local two-cluster FCM on the ball's members and hard-assign each member by
/// maximum membership. `None` when the split degenerates.
fn local_fcm_split(
    dataset: &Dataset,
    ball: &FuzzyGranularBall,
    seeds: &Seeds,
    fcm: &FcmConfig,
) -> Option<LocalSplit> {
    if seeds.centers.center(0) == seeds.centers.center(1) {
        return None;
    }
    let local = dataset.subset(ball.members()).ok()?;
    let fit = fcm_fit(&local, 2, fcm, Some(&seeds.centers)).ok()?;
    let (mut left, mut right) = (Vec::new(), Vec::new());
    for (&idx, label) in ball.members().iter().zip(hard_labels(&fit.membership)) {
        if label == 0 {
            left.push(idx);
        } else {
            right.push(idx);
        }
    }
    if left.is_empty() || right.is_empty() {
        return None;
    }
    Some(LocalSplit {
        membership: fit.membership,
        centers: fit.centers,
        left,
        right,
    })
}

fn weighted_dm(parent: &FuzzyGranularBall, a: &FuzzyGranularBall, b: &FuzzyGranularBall) -> f64 {
    let n = parent.size() as f64;
    (a.size() as f64 / n) * a.dm() + (b.size() as f64 / n) * b.dm()
}

fn candidate(
    dataset: &Dataset,
    parent: &FuzzyGranularBall,
    split: LocalSplit,
) -> Result<SplitCandidate> {
    let child1 = ball_stats(dataset, &split.left)?;
    let child2 = ball_stats(dataset, &split.right)?;
    let dm_weight = weighted_dm(parent, &child1, &child2);
    Ok(SplitCandidate {
        parent: parent.clone(),
        child1,
        child2,
        dm_parent: parent.dm(),
        dm_weight,
        local_membership: split.membership,
        local_centers: split.centers,
    })
}

/// Attempt one distribution-measure-gated split. Balls below `min_split_size`,
/// zero-radius balls, degenerate local fits, and splits whose weighted DM does not
/// strictly improve on the parent's all return `None`.
pub fn try_split(
    dataset: &Dataset,
    ball: &FuzzyGranularBall,
    config: &BallGenConfig,
) -> Option<SplitCandidate> {
    if ball.size() < config.min_split_size.max(2) || ball.radius() <= 0.0 {
        return None;
    }
    let seeds = seed_points(dataset, ball).ok()?;
    let split = local_fcm_split(dataset, ball, &seeds, &config.fcm)?;
    let cand = candidate(dataset, ball, split).ok()?;
    (cand.dm_weight < cand.dm_parent).then_some(cand)
}

/// Split without the DM test. Falls back to nearest-seed assignment (between the
/// distinct members `p1` and `p2`) when the local FCM partition degenerates, so any
/// ball with positive radius and at least two members always splits.
fn force_split(
    dataset: &Dataset,
    ball: &FuzzyGranularBall,
    config: &BallGenConfig,
) -> Option<SplitCandidate> {
    if ball.size() < 2 || ball.radius() <= 0.0 {
        return None;
    }
    let seeds = seed_points(dataset, ball).ok()?;
    let split = match local_fcm_split(dataset, ball, &seeds, &config.fcm) {
        Some(s) => s,
        None => {
            let (a, b) = (dataset.point(seeds.p1), dataset.point(seeds.p2));
            let labels: Vec<usize> = ball
                .members()
                .iter()
                .map(|&i| {
                    let p = dataset.point(i);
                    usize::from(squared_euclidean(p, b) < squared_euclidean(p, a))
                })
                .collect();
            let (left, right): (Vec<_>, Vec<_>) = ball
                .members()
                .iter()
                .zip(&labels)
                .partition(|(_, &l)| l == 0);
            let left: Vec<usize> = left.into_iter().map(|(&i, _)| i).collect();
            let right: Vec<usize> = right.into_iter().map(|(&i, _)| i).collect();
            if left.is_empty() || right.is_empty() {
                return None;
            }
            let membership = MembershipMatrix::one_hot(&labels, 2).ok()?;
            let centers = CenterSet::from_rows(&[a, b]).ok()?;
            LocalSplit {
                membership,
                centers,
                left,
                right,
            }
        }
    };
    candidate(dataset, ball, split).ok()
}

/// Recursively split the dataset into granular-balls until no ball splits.
/// The result partitions `0..n`.
pub fn generate_balls(dataset: &Dataset, config: &BallGenConfig) -> Result<Vec<FuzzyGranularBall>> {
    let (balls, _) = split_until_stable(dataset, config)?;
    Ok(balls)
}

fn split_until_stable(
    dataset: &Dataset,
    config: &BallGenConfig,
) -> Result<(Vec<FuzzyGranularBall>, Vec<SplitRecord>)> {
    config.validate()?;
    let all: Vec<usize> = (0..dataset.n()).collect();
    let mut queue = VecDeque::from([ball_stats(dataset, &all)?]);
    let mut done = Vec::new();
    let mut splits = Vec::new();
    while let Some(ball) = queue.pop_front() {
        match try_split(dataset, &ball, config) {
            Some(cand) => {
                splits.push(SplitRecord::from(&cand));
                queue.push_back(cand.child1);
                queue.push_back(cand.child2);
            }
            None => done.push(ball),
        }
    }
    Ok((done, splits))
}

/// Median of a non-empty slice (mean of the two middle values for even length).
fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 0 {
        0.5 * (v[mid - 1] + v[mid])
    } else {
        v[mid]
    }
}

/// Radius above which a ball counts as oversize for the current ball set.
pub fn oversize_threshold(balls: &[FuzzyGranularBall], radius_factor: f64) -> f64 {
    let radii: Vec<f64> = balls.iter().map(FuzzyGranularBall::radius).collect();
    let mean = radii.iter().sum::<f64>() / radii.len() as f64;
    radius_factor * mean.max(median(&radii))
}

/// Repeatedly force-split every oversize ball (`r >= factor · max(mean r, median r)`,
/// statistics recomputed once per sweep) until a sweep changes nothing.
pub fn normalize_radii(
    dataset: &Dataset,
    balls: Vec<FuzzyGranularBall>,
    config: &BallGenConfig,
) -> Result<Vec<FuzzyGranularBall>> {
    let mut forced = Vec::new();
    normalize_into(dataset, balls, config, &mut forced)
}

fn normalize_into(
    dataset: &Dataset,
    mut balls: Vec<FuzzyGranularBall>,
    config: &BallGenConfig,
    forced: &mut Vec<SplitRecord>,
) -> Result<Vec<FuzzyGranularBall>> {
    config.validate()?;
    if balls.is_empty() {
        return Err(Error::invalid("cannot normalize an empty ball list"));
    }
    loop {
        let threshold = oversize_threshold(&balls, config.radius_factor);
        let mut changed = false;
        let mut next = Vec::with_capacity(balls.len() + 1);
        for ball in balls {
            let oversize = ball.radius() >= threshold && ball.size() >= config.min_split_size;
            match oversize
                .then(|| force_split(dataset, &ball, config))
                .flatten()
            {
                Some(cand) => {
                    forced.push(SplitRecord::from(&cand));
                    next.push(cand.child1);
                    next.push(cand.child2);
                    changed = true;
                }
                None => next.push(ball),
            }
        }
        balls = next;
        if !changed {
            return Ok(balls);
        }
    }
}

/// Full ball generation: DM-gated splitting followed by radius normalization.
pub fn granulate(dataset: &Dataset, config: &BallGenConfig) -> Result<BallGeneration> {
    let (balls, splits) = split_until_stable(dataset, config)?;
    let mut forced_splits = Vec::new();
    let balls = normalize_into(dataset, balls, config, &mut forced_splits)?;
    Ok(BallGeneration {
        balls,
        splits,
        forced_splits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal, Uniform};

    fn ds(rows: &[[f64; 2]]) -> Dataset {
        Dataset::from_rows(rows, None).unwrap()
    }

    fn whole(data: &Dataset) -> FuzzyGranularBall {
        ball_stats(data, &(0..data.n()).collect::<Vec<_>>()).unwrap()
    }

    fn assert_partition(balls: &[FuzzyGranularBall], n: usize) {
        let mut seen = vec![false; n];
        for b in balls {
            for &i in b.members() {
                assert!(!seen[i], "point {i} in two balls");
                seen[i] = true;
            }
        }
        assert!(seen.iter().all(|&s| s), "some point not covered");
    }

    /// Mean member distance to the member centroid, from scratch.
    fn brute_dm(data: &Dataset, members: &[usize]) -> f64 {
        let d = data.d();
        let n = members.len() as f64;
        let center: Vec<f64> = (0..d)
            .map(|k| members.iter().map(|&i| data.point(i)[k]).sum::<f64>() / n)
            .collect();
        members
            .iter()
            .map(|&i| {
                data.point(i)
                    .iter()
                    .zip(&center)
                    .map(|(a, b)| (a - b).powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .sum::<f64>()
            / n
    }

    fn two_blobs(per: usize, seed: u64) -> (Dataset, Vec<usize>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let noise = Normal::new(0.0, 0.3).unwrap();
        let mut rows = Vec::new();
        let mut truth = Vec::new();
        for (label, cx) in [(0usize, 0.0), (1, 10.0)] {
            for _ in 0..per {
                rows.push([cx + noise.sample(&mut rng), noise.sample(&mut rng)]);
                truth.push(label);
            }
        }
        (ds(&rows), truth)
    }

    #[test]
    fn seeds_for_two_points() {
        let data = ds(&[[0.0, 0.0], [4.0, 0.0]]);
        let v = initial_split_centers(&data, &whole(&data)).unwrap();
        assert_eq!(v.center(0), &[1.0, 0.0]);
        assert_eq!(v.center(1), &[3.0, 0.0]);
    }

    #[test]
    fn seeds_for_symmetric_triple() {
        let data = ds(&[[-2.0, 0.0], [0.0, 0.0], [2.0, 0.0]]);
        let v = initial_split_centers(&data, &whole(&data)).unwrap();
        assert_eq!(v.center(0), &[-1.0, 0.0]);
        assert_eq!(v.center(1), &[1.0, 0.0]);
    }

    #[test]
    fn seeds_for_identical_points_coincide() {
        let data = ds(&[[1.0, 1.0], [1.0, 1.0], [1.0, 1.0]]);
        let v = initial_split_centers(&data, &whole(&data)).unwrap();
        assert_eq!(v.center(0), v.center(1));
        assert!(try_split(&data, &whole(&data), &BallGenConfig::default()).is_none());
        let single = ds(&[[1.0, 1.0]]);
        assert!(initial_split_centers(&single, &whole(&single)).is_err());
    }

    #[test]
    fn split_accepts_separated_blobs() {
        let (data, truth) = two_blobs(10, 7);
        let ball = whole(&data);
        let cand = try_split(&data, &ball, &BallGenConfig::default()).expect("split accepted");
        // independent DM evaluation
        let dm_c = brute_dm(&data, ball.members());
        let dm1 = brute_dm(&data, cand.child1.members());
        let dm2 = brute_dm(&data, cand.child2.members());
        let w = (cand.child1.size() as f64 * dm1 + cand.child2.size() as f64 * dm2) / 20.0;
        assert!((dm_c - cand.dm_parent).abs() < 1e-12);
        assert!((w - cand.dm_weight).abs() < 1e-12);
        assert!(w < dm_c);
        for child in [&cand.child1, &cand.child2] {
            let first = truth[child.members()[0]];
            assert!(child.members().iter().all(|&i| truth[i] == first));
        }
        assert_eq!(cand.local_membership.n(), 20);
    }

    #[test]
    fn uniform_disk_verdict_matches_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let unit = Uniform::new(0.0f64, 1.0).unwrap();
        let rows: Vec<[f64; 2]> = (0..20)
            .map(|_| {
                let r = unit.sample(&mut rng).sqrt();
                let t = unit.sample(&mut rng) * std::f64::consts::TAU;
                [r * t.cos(), r * t.sin()]
            })
            .collect();
        let data = ds(&rows);
        let ball = whole(&data);
        let seeds = seed_points(&data, &ball).unwrap();
        let split = local_fcm_split(&data, &ball, &seeds, &FcmConfig::default()).unwrap();
        let w = (split.left.len() as f64 * brute_dm(&data, &split.left)
            + split.right.len() as f64 * brute_dm(&data, &split.right))
            / 20.0;
        let verdict = try_split(&data, &ball, &BallGenConfig::default());
        assert_eq!(verdict.is_some(), w < brute_dm(&data, ball.members()));
    }

    #[test]
    fn small_balls_never_split() {
        let data = ds(&[[0.0, 0.0], [0.0, 0.0]]);
        assert!(try_split(&data, &whole(&data), &BallGenConfig::default()).is_none());
        let data = ds(&[[0.0, 0.0], [5.0, 0.0]]);
        assert!(try_split(&data, &whole(&data), &BallGenConfig::default()).is_none());
    }

    #[test]
    fn generate_single_point_and_duplicates() {
        let one = ds(&[[3.0, 4.0]]);
        let balls = generate_balls(&one, &BallGenConfig::default()).unwrap();
        assert_eq!(balls.len(), 1);
        assert_eq!(balls[0].members(), &[0]);

        let same = ds(&[[2.0, 2.0]; 12]);
        let balls = generate_balls(&same, &BallGenConfig::default()).unwrap();
        assert_eq!(balls.len(), 1);
        assert_eq!(balls[0].radius(), 0.0);
    }

    #[test]
    fn generate_keeps_blobs_apart() {
        let (data, truth) = two_blobs(50, 11);
        let gen = granulate(&data, &BallGenConfig::default()).unwrap();
        assert!(gen.balls.len() >= 2);
        assert_partition(&gen.balls, data.n());
        for b in &gen.balls {
            let first = truth[b.members()[0]];
            assert!(
                b.members().iter().all(|&i| truth[i] == first),
                "ball mixes blobs"
            );
        }
        assert!(gen.splits.len() < data.n());
        for s in &gen.splits {
            assert!(s.dm_weight < s.dm_parent);
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let (data, _) = two_blobs(40, 5);
        let a = granulate(&data, &BallGenConfig::default()).unwrap();
        let b = granulate(&data, &BallGenConfig::default()).unwrap();
        assert_eq!(a.balls, b.balls);
        assert_eq!(a.splits, b.splits);
    }

    fn ring_ball(data_rows: &mut Vec<[f64; 2]>, cx: f64, r: f64) -> Vec<usize> {
        let start = data_rows.len();
        for k in 0..4 {
            let t = k as f64 * std::f64::consts::FRAC_PI_2;
            data_rows.push([cx + r * t.cos(), r * t.sin()]);
        }
        (start..start + 4).collect()
    }

    #[test]
    fn normalize_leaves_equal_radii() {
        let mut rows = Vec::new();
        let groups: Vec<Vec<usize>> = (0..5)
            .map(|i| ring_ball(&mut rows, i as f64 * 10.0, 1.0))
            .collect();
        let data = ds(&rows);
        let balls: Vec<_> = groups
            .iter()
            .map(|g| ball_stats(&data, g).unwrap())
            .collect();
        let out = normalize_radii(&data, balls.clone(), &BallGenConfig::default()).unwrap();
        assert_eq!(out, balls);
    }

    #[test]
    fn normalize_splits_the_giant() {
        let mut rows = Vec::new();
        let mut groups: Vec<Vec<usize>> = (0..9)
            .map(|i| ring_ball(&mut rows, i as f64 * 10.0, 1.0))
            .collect();
        groups.push(ring_ball(&mut rows, 200.0, 10.0));
        let data = ds(&rows);
        let balls: Vec<_> = groups
            .iter()
            .map(|g| ball_stats(&data, g).unwrap())
            .collect();
        // mean 1.9, median 1, threshold 3.8
        assert!((oversize_threshold(&balls, 2.0) - 3.8).abs() < 1e-12);
        let out = normalize_radii(&data, balls, &BallGenConfig::default()).unwrap();
        assert!(out.len() > 10);
        assert_partition(&out, data.n());
    }

    #[test]
    fn normalize_single_ball_unchanged() {
        let (data, _) = two_blobs(5, 1);
        let balls = vec![whole(&data)];
        let out = normalize_radii(&data, balls.clone(), &BallGenConfig::default()).unwrap();
        assert_eq!(out, balls);
        assert!(normalize_radii(&data, Vec::new(), &BallGenConfig::default()).is_err());
    }

    #[test]
    fn config_validation() {
        let bad = BallGenConfig {
            min_split_size: 1,
            ..BallGenConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = BallGenConfig {
            radius_factor: 0.0,
            ..BallGenConfig::default()
        };
        assert!(bad.validate().is_err());
        assert!(BallGenConfig::default().validate().is_ok());
    }

    #[test]
    fn median_even_and_odd() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
