use crate::error::{Error, Result};

/// Tolerance on the per-row sum-to-one constraint.
pub const ROW_SUM_TOLERANCE: f64 = 1e-9;

/// `n × c` fuzzy membership matrix, stored row-major (one row per sample).
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipMatrix {
    values: Vec<f64>,
    n: usize,
    c: usize,
}

impl MembershipMatrix {
    /// Validating constructor: entries must lie in `[0, 1]` and every row must sum to 1.
    pub fn new(values: Vec<f64>, n: usize, c: usize) -> Result<Self> {
        if n == 0 || c == 0 {
            return Err(Error::invalid("membership matrix needs n >= 1 and c >= 1"));
        }
        if values.len() != n * c {
            return Err(Error::invalid(format!(
                "membership buffer has {} entries, expected {n} x {c}",
                values.len()
            )));
        }
        let m = Self { values, n, c };
        for (j, row) in m.rows().enumerate() {
            if row.iter().any(|u| !(0.0..=1.0).contains(u)) {
                return Err(Error::invalid(format!(
                    "membership row {j} has an entry outside [0, 1]"
                )));
            }
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > ROW_SUM_TOLERANCE {
                return Err(Error::invalid(format!(
                    "membership row {j} sums to {s}, not 1"
                )));
            }
        }
        Ok(m)
    }

    pub(crate) fn from_raw(values: Vec<f64>, n: usize, c: usize) -> Self {
        debug_assert_eq!(values.len(), n * c);
        Self { values, n, c }
    }

    /// Crisp memberships: row `j` is one-hot at `labels[j]`.
    pub fn one_hot(labels: &[usize], c: usize) -> Result<Self> {
        if let Some(&bad) = labels.iter().find(|&&l| l >= c) {
            return Err(Error::invalid(format!(
                "label {bad} out of range for c = {c}"
            )));
        }
        let mut values = vec![0.0; labels.len() * c];
        for (j, &l) in labels.iter().enumerate() {
            values[j * c + l] = 1.0;
        }
        Self::new(values, labels.len(), c)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn c(&self) -> usize {
        self.c
    }

    #[inline]
    pub fn get(&self, sample: usize, cluster: usize) -> f64 {
        self.values[sample * self.c + cluster]
    }

    pub fn row(&self, sample: usize) -> &[f64] {
        &self.values[sample * self.c..(sample + 1) * self.c]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.values.chunks_exact(self.c)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn as_flat_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Largest absolute deviation of any row sum from 1.
    pub fn max_row_sum_error(&self) -> f64 {
        self.rows()
            .map(|r| (r.iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}
