use crate::ball::FuzzyGranularBall;

/// Hard clustering of a dataset, with the ball inventory for granular-ball methods.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusteringResult {
    /// One label per input point, each in `0..n_clusters`.
    pub point_labels: Vec<usize>,
    /// Label of each ball (granular-ball methods only).
    pub ball_labels: Option<Vec<usize>>,
    pub balls: Option<Vec<FuzzyGranularBall>>,
    pub n_clusters: usize,
    pub iterations: usize,
    pub runtime_seconds: f64,
}

impl ClusteringResult {
    pub(crate) fn from_balls(
        n_points: usize,
        balls: Vec<FuzzyGranularBall>,
        ball_labels: Vec<usize>,
        n_clusters: usize,
        iterations: usize,
    ) -> Self {
        let mut point_labels = vec![0; n_points];
        for (ball, &label) in balls.iter().zip(&ball_labels) {
            for &i in ball.members() {
                point_labels[i] = label;
            }
        }
        Self {
            point_labels,
            ball_labels: Some(ball_labels),
            balls: Some(balls),
            n_clusters,
            iterations,
            runtime_seconds: 0.0,
        }
    }

    pub fn n_balls(&self) -> Option<usize> {
        self.balls.as_ref().map(Vec::len)
    }
}
