//! Adaptive overlap connectivity between granular-balls.
//!
//! Two balls are adjacent when the gap between their surfaces,
//! `‖c_i − c_j‖ − (r_i + r_j)`, is below `τ_ij = min(r_i, r_j) / (1 + min(o_i, o_j))`,
//! where `o` counts how many neighbours a ball overlaps. Busy balls therefore need a
//! tighter contact before they merge. Clusters are the connected components.

use std::collections::BTreeSet;

use crate::ball::FuzzyGranularBall;
use crate::dataset::{euclidean, Dataset};
use crate::error::{Error, Result};
use crate::result::ClusteringResult;

/// `min(r_i, r_j) / (1 + min(o_i, o_j))`
pub fn adjacency_threshold(r_i: f64, r_j: f64, o_i: usize, o_j: usize) -> f64 {
    r_i.min(r_j) / (1.0 + o_i.min(o_j) as f64)
}

/// Distance between ball surfaces; negative when the balls overlap.
pub fn surface_gap(a: &FuzzyGranularBall, b: &FuzzyGranularBall) -> f64 {
    euclidean(a.center(), b.center()) - (a.radius() + b.radius())
}

pub fn adjacent(a: &FuzzyGranularBall, b: &FuzzyGranularBall, tau: f64) -> bool {
    surface_gap(a, b) < tau
}

/// Ball adjacency produced by the three connection passes.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapGraph {
    pub n_balls: usize,
    /// Raw overlap count per ball (pairs with gap below `min(r_i, r_j)`).
    pub overlap_counts: Vec<usize>,
    /// Pairs `(i, j)`, `i < j`, satisfying the count-adjusted adjacent rule.
    pub adjacency: BTreeSet<(usize, usize)>,
    /// Nearest-neighbour edges `(isolated ball, nearest ball)` added for balls left
    /// without any adjacent pair.
    pub attachments: Vec<(usize, usize)>,
}

impl OverlapGraph {
    pub fn build(balls: &[FuzzyGranularBall]) -> Self {
        let m = balls.len();
        let mut gaps = vec![0.0; m * m];
        for i in 0..m {
            for j in (i + 1)..m {
                let g = surface_gap(&balls[i], &balls[j]);
                gaps[i * m + j] = g;
                gaps[j * m + i] = g;
            }
        }

        let mut counts = vec![0usize; m];
        for i in 0..m {
            for j in (i + 1)..m {
                let tau = adjacency_threshold(balls[i].radius(), balls[j].radius(), 0, 0);
                if gaps[i * m + j] < tau {
                    counts[i] += 1;
                    counts[j] += 1;
                }
            }
        }

        let mut adjacency = BTreeSet::new();
        let mut degree = vec![0usize; m];
        for i in 0..m {
            for j in (i + 1)..m {
                let tau =
                    adjacency_threshold(balls[i].radius(), balls[j].radius(), counts[i], counts[j]);
                if gaps[i * m + j] < tau {
                    adjacency.insert((i, j));
                    degree[i] += 1;
                    degree[j] += 1;
                }
            }
        }

        let mut attachments = Vec::new();
        if m >= 2 {
            for i in (0..m).filter(|&i| degree[i] == 0) {
                let nearest = (0..m)
                    .filter(|&j| j != i)
                    .map(|j| (j, euclidean(balls[i].center(), balls[j].center())))
                    .fold((usize::MAX, f64::INFINITY), |best, (j, dist)| {
                        if dist < best.1 {
                            (j, dist)
                        } else {
                            best
                        }
                    })
                    .0;
                attachments.push((i, nearest));
            }
        }

        Self {
            n_balls: m,
            overlap_counts: counts,
            adjacency,
            attachments,
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .copied()
            .chain(self.attachments.iter().copied())
    }

    /// Component id per ball, numbered in order of each component's smallest ball index.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let mut uf = UnionFind::new(self.n_balls);
        for (a, b) in self.edges() {
            uf.union(a, b);
        }
        let mut id_of_root = vec![usize::MAX; self.n_balls];
        let mut labels = Vec::with_capacity(self.n_balls);
        let mut next = 0;
        for i in 0..self.n_balls {
            let root = uf.find(i);
            if id_of_root[root] == usize::MAX {
                id_of_root[root] = next;
                next += 1;
            }
            labels.push(id_of_root[root]);
        }
        (labels, next)
    }
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}

/// Connect balls by the adaptive overlap rule; the cluster count is whatever number
/// of components results.
pub fn connect_overlap(
    dataset: &Dataset,
    balls: Vec<FuzzyGranularBall>,
) -> Result<ClusteringResult> {
    if balls.is_empty() {
        return Err(Error::invalid("no granular-balls to connect"));
    }
    let graph = OverlapGraph::build(&balls);
    let (labels, n_clusters) = graph.components();
    Ok(ClusteringResult::from_balls(
        dataset.n(),
        balls,
        labels,
        n_clusters,
        0,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::ball_stats;

    /// Balls built from a two-point diameter along x, so center = (cx, 0) and radius = r.
    fn balls_on_line(specs: &[(f64, f64)]) -> (Dataset, Vec<FuzzyGranularBall>) {
        let mut rows = Vec::new();
        for &(cx, r) in specs {
            rows.push([cx - r, 0.0]);
            rows.push([cx + r, 0.0]);
        }
        let data = Dataset::from_rows(&rows, None).unwrap();
        let balls = (0..specs.len())
            .map(|b| ball_stats(&data, &[2 * b, 2 * b + 1]).unwrap())
            .collect();
        (data, balls)
    }

    #[test]
    fn threshold_examples() {
        assert_eq!(adjacency_threshold(1.0, 1.5, 0, 0), 1.0);
        assert_eq!(adjacency_threshold(1.0, 1.5, 3, 1), 0.5);
        assert_eq!(adjacency_threshold(0.0, 4.0, 0, 0), 0.0);
        assert_eq!(
            adjacency_threshold(1.5, 1.0, 1, 3),
            adjacency_threshold(1.0, 1.5, 3, 1)
        );
    }

    #[test]
    fn adjacency_examples() {
        let (_, b) = balls_on_line(&[(0.0, 1.0), (3.0, 1.5)]);
        assert!((surface_gap(&b[0], &b[1]) - 0.5).abs() < 1e-15);
        assert!(adjacent(&b[0], &b[1], 1.0));
        assert!(adjacent(&b[1], &b[0], 1.0));

        let (_, b) = balls_on_line(&[(0.0, 1.0), (10.0, 1.0)]);
        assert!(!adjacent(&b[0], &b[1], 1.0));

        let (_, b) = balls_on_line(&[(0.0, 1.0), (0.0, 2.0)]);
        assert!(adjacent(&b[0], &b[1], 0.0));
    }

    #[test]
    fn single_ball_one_cluster() {
        let (data, balls) = balls_on_line(&[(0.0, 1.0)]);
        let res = connect_overlap(&data, balls).unwrap();
        assert_eq!(res.n_clusters, 1);
        assert_eq!(res.point_labels, vec![0, 0]);
    }

    #[test]
    fn touching_chain() {
        let (data, balls) = balls_on_line(&[(0.0, 1.0), (2.1, 1.0), (4.2, 1.0)]);
        let res = connect_overlap(&data, balls).unwrap();
        assert_eq!(res.n_clusters, 1);
        assert_eq!(res.ball_labels.unwrap(), vec![0, 0, 0]);
    }

    #[test]
    fn isolated_ball_attaches_to_nearest() {
        let (data, balls) = balls_on_line(&[(0.0, 1.0), (2.1, 1.0), (50.0, 1.0)]);
        let graph = OverlapGraph::build(&balls);
        assert_eq!(graph.overlap_counts, vec![1, 1, 0]);
        assert_eq!(
            graph.adjacency.iter().copied().collect::<Vec<_>>(),
            vec![(0, 1)]
        );
        assert_eq!(graph.attachments, vec![(2, 1)]);
        let res = connect_overlap(&data, balls).unwrap();
        assert_eq!(res.n_clusters, 1);
    }

    #[test]
    fn isolated_pair_stays_separate_from_far_group() {
        // two far-apart touching pairs: each pair is its own component
        let (data, balls) = balls_on_line(&[(0.0, 1.0), (2.1, 1.0), (100.0, 1.0), (102.1, 1.0)]);
        let res = connect_overlap(&data, balls).unwrap();
        assert_eq!(res.n_clusters, 2);
        assert_eq!(res.ball_labels.unwrap(), vec![0, 0, 1, 1]);
        assert_eq!(res.point_labels, vec![0, 0, 0, 0, 1, 1, 1, 1]);
    }

    #[test]
    fn busy_balls_need_tighter_contact() {
        // Ball 0 overlaps three neighbours; its link to the loosely touching ball 4
        // passes the raw count rule but not the count-adjusted one.
        let (_, balls) =
            balls_on_line(&[(0.0, 1.0), (1.0, 1.0), (-1.0, 1.0), (0.5, 1.0), (2.9, 1.0)]);
        let graph = OverlapGraph::build(&balls);
        assert!(surface_gap(&balls[0], &balls[4]) < adjacency_threshold(1.0, 1.0, 0, 0));
        assert!(!graph.adjacency.contains(&(0, 4)));
    }
}
