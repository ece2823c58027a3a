//! External cluster-validity measures: mapped accuracy, NMI and ARI.

mod hungarian;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};

/// Cross-tabulation of true classes (rows) against predicted clusters (columns).
///
/// Label values are re-indexed densely in ascending order on both axes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    counts: Vec<usize>,
    rows: usize,
    cols: usize,
    row_sums: Vec<usize>,
    col_sums: Vec<usize>,
    total: usize,
}

impl ContingencyTable {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> usize {
        self.counts[row * self.cols + col]
    }

    pub fn row_sums(&self) -> &[usize] {
        &self.row_sums
    }

    pub fn col_sums(&self) -> &[usize] {
        &self.col_sums
    }

    pub fn total(&self) -> usize {
        self.total
    }

    fn cells(&self) -> impl Iterator<Item = usize> + '_ {
        self.counts.iter().copied()
    }

    /// True when the two labelings are the same partition up to renaming.
    fn is_bijective(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| (0..self.cols).filter(|&c| self.get(r, c) > 0).count() == 1)
            && (0..self.cols).all(|c| (0..self.rows).filter(|&r| self.get(r, c) > 0).count() == 1)
    }
}

fn dense_index(labels: &[usize]) -> (Vec<usize>, usize) {
    let ids: BTreeMap<usize, usize> = labels
        .iter()
        .copied()
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .enumerate()
        .map(|(i, l)| (l, i))
        .collect();
    (labels.iter().map(|l| ids[l]).collect(), ids.len())
}

pub fn contingency(true_labels: &[usize], pred_labels: &[usize]) -> Result<ContingencyTable> {
    if true_labels.len() != pred_labels.len() {
        return Err(Error::invalid(format!(
            "label length mismatch: {} true vs {} predicted",
            true_labels.len(),
            pred_labels.len()
        )));
    }
    if true_labels.is_empty() {
        return Err(Error::invalid("cannot score an empty labeling"));
    }
    let (t, rows) = dense_index(true_labels);
    let (p, cols) = dense_index(pred_labels);
    let mut counts = vec![0; rows * cols];
    let mut row_sums = vec![0; rows];
    let mut col_sums = vec![0; cols];
    for (&a, &b) in t.iter().zip(&p) {
        counts[a * cols + b] += 1;
        row_sums[a] += 1;
        col_sums[b] += 1;
    }
    Ok(ContingencyTable {
        counts,
        rows,
        cols,
        row_sums,
        col_sums,
        total: t.len(),
    })
}

/// Fraction of points whose predicted cluster maps to their true class under the
/// best one-to-one cluster→class mapping.
pub fn accuracy(true_labels: &[usize], pred_labels: &[usize]) -> Result<f64> {
    let table = contingency(true_labels, pred_labels)?;
    let k = table.rows.max(table.cols);
    let weight: Vec<Vec<i64>> = (0..k)
        .map(|r| {
            (0..k)
                .map(|c| {
                    if r < table.rows && c < table.cols {
                        table.get(r, c) as i64
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect();
    let assignment = hungarian::max_weight_assignment(&weight);
    let matched: i64 = assignment
        .iter()
        .enumerate()
        .map(|(r, &c)| weight[r][c])
        .sum();
    Ok(matched as f64 / table.total as f64)
}

fn entropy(sums: &[usize], n: f64) -> f64 {
    -sums
        .iter()
        .filter(|&&s| s > 0)
        .map(|&s| {
            let p = s as f64 / n;
            p * p.ln()
        })
        .sum::<f64>()
}

/// `2·MI(L, C) / (H(L) + H(C))`, natural logarithms.
///
/// Two single-cluster labelings score 1; if exactly one side is a single cluster the
/// score is 0.
pub fn nmi(true_labels: &[usize], pred_labels: &[usize]) -> Result<f64> {
    let table = contingency(true_labels, pred_labels)?;
    let n = table.total as f64;
    let h_true = entropy(&table.row_sums, n);
    let h_pred = entropy(&table.col_sums, n);
    match (h_true == 0.0, h_pred == 0.0) {
        (true, true) => return Ok(1.0),
        (true, false) | (false, true) => return Ok(0.0),
        _ => {}
    }
    let mut mi = 0.0;
    for r in 0..table.rows {
        for c in 0..table.cols {
            let nij = table.get(r, c);
            if nij == 0 {
                continue;
            }
            let nij = nij as f64;
            let ratio = n * nij / (table.row_sums[r] as f64 * table.col_sums[c] as f64);
            mi += nij / n * ratio.ln();
        }
    }
    Ok((2.0 * mi / (h_true + h_pred)).clamp(0.0, 1.0))
}

fn choose2(x: usize) -> f64 {
    let x = x as f64;
    x * (x - 1.0) / 2.0
}

/// Adjusted Rand index from the contingency table.
///
/// When the chance-corrected denominator vanishes the index is 1 for identical
/// partitions (up to renaming) and 0 otherwise.
pub fn ari(true_labels: &[usize], pred_labels: &[usize]) -> Result<f64> {
    let table = contingency(true_labels, pred_labels)?;
    let index: f64 = table.cells().map(choose2).sum();
    let sum_rows: f64 = table.row_sums.iter().copied().map(choose2).sum();
    let sum_cols: f64 = table.col_sums.iter().copied().map(choose2).sum();
    let pairs = choose2(table.total);
    let expected = if pairs > 0.0 {
        sum_rows * sum_cols / pairs
    } else {
        0.0
    };
    let max_index = 0.5 * (sum_rows + sum_cols);
    let denom = max_index - expected;
    if denom == 0.0 {
        return Ok(if table.is_bijective() { 1.0 } else { 0.0 });
    }
    Ok((index - expected) / denom)
}

/// One run's scores, in the layout written to the metrics JSON.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    /// `None` when the dataset carries no ground-truth labels.
    pub acc: Option<f64>,
    pub nmi: Option<f64>,
    pub ari: Option<f64>,
    /// Wall-clock time of the whole method. Kept out of the serialized report so
    /// that repeated runs produce identical files; see the harness timing output.
    #[serde(skip)]
    pub runtime_seconds: f64,
    pub n_balls: Option<usize>,
    pub n_clusters: usize,
    pub method: String,
    pub seed: u64,
}
