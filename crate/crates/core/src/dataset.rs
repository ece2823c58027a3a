//! Point storage and the Euclidean metric every other module builds on.

use crate::error::{Error, Result};

/// Row-major `n × d` matrix of finite coordinates with optional ground-truth labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    points: Vec<f64>,
    labels: Option<Vec<usize>>,
    n: usize,
    d: usize,
}

impl Dataset {
    /// Build a dataset from a flat row-major buffer.
    pub fn new(points: Vec<f64>, d: usize, labels: Option<Vec<usize>>) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("dimensionality must be at least 1"));
        }
        if points.is_empty() {
            return Err(Error::invalid("dataset must contain at least one point"));
        }
        if points.len() % d != 0 {
            return Err(Error::invalid(format!(
                "buffer of length {} is not a multiple of d = {d}",
                points.len()
            )));
        }
        if let Some(pos) = points.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "non-finite coordinate at point {}, dimension {}",
                pos / d,
                pos % d
            )));
        }
        let n = points.len() / d;
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(Error::invalid(format!(
                    "label count {} does not match point count {n}",
                    l.len()
                )));
            }
        }
        Ok(Self {
            points,
            labels,
            n,
            d,
        })
    }

    /// Build a dataset from a list of rows. All rows must have the same length.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R], labels: Option<Vec<usize>>) -> Result<Self> {
        let d = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut buf = Vec::with_capacity(rows.len() * d);
        for r in rows {
            let r = r.as_ref();
            if r.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: r.len(),
                });
            }
            buf.extend_from_slice(r);
        }
        Self::new(buf, d, labels)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.d..(i + 1) * self.d]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.points.chunks_exact(self.d)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.points
    }

    pub fn labels(&self) -> Option<&[usize]> {
        self.labels.as_deref()
    }

    pub fn without_labels(mut self) -> Self {
        self.labels = None;
        self
    }

    /// Copy the given rows into a new unlabeled dataset, in the order given.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::invalid("subset index list is empty"));
        }
        let mut buf = Vec::with_capacity(indices.len() * self.d);
        for &i in indices {
            if i >= self.n {
                return Err(Error::invalid(format!(
                    "point index {i} out of range (n = {})",
                    self.n
                )));
            }
            buf.extend_from_slice(self.point(i));
        }
        Ok(Self {
            points: buf,
            labels: None,
            n: indices.len(),
            d: self.d,
        })
    }

    /// Rescale every feature to `[0, 1]`. Constant features map to 0.
    pub fn min_max_scaled(&self) -> Self {
        let mut lo = vec![f64::INFINITY; self.d];
        let mut hi = vec![f64::NEG_INFINITY; self.d];
        for p in self.points() {
            for (j, &v) in p.iter().enumerate() {
                lo[j] = lo[j].min(v);
                hi[j] = hi[j].max(v);
            }
        }
        let points = self
            .points
            .iter()
            .enumerate()
            .map(|(idx, &v)| {
                let j = idx % self.d;
                let span = hi[j] - lo[j];
                if span > 0.0 {
                    (v - lo[j]) / span
                } else {
                    0.0
                }
            })
            .collect();
        Self {
            points,
            labels: self.labels.clone(),
            n: self.n,
            d: self.d,
        }
    }
}

/// Euclidean distance between two equal-length vectors.
pub fn distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(euclidean(a, b))
}

/// Unchecked variant of [`distance`] for internal hot loops.
#[inline]
pub(crate) fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    squared_euclidean(a, b).sqrt()
}

#[inline]
pub(crate) fn squared_euclidean(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}
