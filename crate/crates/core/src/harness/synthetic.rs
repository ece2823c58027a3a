use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::dataset::{euclidean, Dataset};
use crate::error::{Error, Result};

/// Minimum pairwise distance between blob centers, in units of `spread`.
pub const CENTER_SEPARATION: f64 = 8.0;

/// Parameters of an isotropic Gaussian-blob dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct BlobSpec {
    /// Total number of points; blob sizes differ by at most one.
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub spread: f64,
    /// Generator seed; falls back to the run seed when absent.
    pub seed: Option<u64>,
}

impl BlobSpec {
    /// Parse `blobs:n=<int>,k=<int>,d=<int>,spread=<real>[,seed=<int>]`.
    pub fn parse(s: &str) -> Result<Self> {
        let body = s.strip_prefix("blobs:").ok_or_else(|| {
            Error::Config(format!(
                "unknown synthetic source {s:?}; expected blobs:..."
            ))
        })?;
        let (mut n, mut k, mut d, mut spread, mut seed) = (None, None, None, None, None);
        for part in body.split(',').filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("malformed synthetic parameter {part:?}")))?;
            let bad = || Error::Config(format!("invalid value for {key}: {value:?}"));
            match key.trim() {
                "n" => n = Some(value.trim().parse().map_err(|_| bad())?),
                "k" => k = Some(value.trim().parse().map_err(|_| bad())?),
                "d" => d = Some(value.trim().parse().map_err(|_| bad())?),
                "spread" => spread = Some(value.trim().parse().map_err(|_| bad())?),
                "seed" => seed = Some(value.trim().parse().map_err(|_| bad())?),
                other => {
                    return Err(Error::Config(format!(
                        "unknown synthetic parameter {other:?}"
                    )))
                }
            }
        }
        let missing = |name: &str| Error::Config(format!("synthetic source is missing {name}="));
        let spec = Self {
            n: n.ok_or_else(|| missing("n"))?,
            k: k.ok_or_else(|| missing("k"))?,
            d: d.ok_or_else(|| missing("d"))?,
            spread: spread.ok_or_else(|| missing("spread"))?,
            seed,
        };
        if spec.n == 0
            || spec.k == 0
            || spec.d == 0
            || !(spec.spread > 0.0 && spec.spread.is_finite())
        {
            return Err(Error::Config(
                "synthetic parameters must all be positive".into(),
            ));
        }
        if spec.k > spec.n {
            return Err(Error::Config(format!(
                "cannot draw {} blobs from {} points",
                spec.k, spec.n
            )));
        }
        Ok(spec)
    }

    pub fn generate(&self, run_seed: u64) -> Result<Dataset> {
        let sizes: Vec<usize> = (0..self.k)
            .map(|i| self.n / self.k + usize::from(i < self.n % self.k))
            .collect();
        blobs(&sizes, self.d, self.spread, self.seed.unwrap_or(run_seed))
    }
}

/// `k` isotropic Gaussian blobs of `n_per_cluster` points each, standard deviation
/// `spread`, centers pairwise at least `8 · spread` apart. Labels are blob ids.
pub fn make_blobs(
    n_per_cluster: usize,
    k: usize,
    d: usize,
    spread: f64,
    seed: u64,
) -> Result<Dataset> {
    if n_per_cluster == 0 || k == 0 || d == 0 || !(spread > 0.0 && spread.is_finite()) {
        return Err(Error::invalid("blob parameters must all be positive"));
    }
    blobs(&vec![n_per_cluster; k], d, spread, seed)
}

fn blobs(sizes: &[usize], d: usize, spread: f64, seed: u64) -> Result<Dataset> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let centers = place_centers(&mut rng, sizes.len(), d, spread);
    let noise = Normal::new(0.0, spread).map_err(|e| Error::invalid(e.to_string()))?;
    let total: usize = sizes.iter().sum();
    let mut buf = Vec::with_capacity(total * d);
    let mut labels = Vec::with_capacity(total);
    for (label, (center, &size)) in centers.iter().zip(sizes).enumerate() {
        for _ in 0..size {
            buf.extend(center.iter().map(|&c| c + noise.sample(&mut rng)));
            labels.push(label);
        }
    }
    Dataset::new(buf, d, Some(labels))
}

/// Rejection-sample centers in a cube, growing the cube whenever it gets crowded.
fn place_centers(rng: &mut ChaCha8Rng, k: usize, d: usize, spread: f64) -> Vec<Vec<f64>> {
    let min_gap = CENTER_SEPARATION * spread;
    let mut side = 2.0 * min_gap * (k as f64).powf(1.0 / d as f64).max(1.0);
    let mut centers: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut misses = 0;
    while centers.len() < k {
        let candidate: Vec<f64> = (0..d).map(|_| rng.random_range(0.0..side)).collect();
        if centers.iter().all(|c| euclidean(c, &candidate) >= min_gap) {
            centers.push(candidate);
            misses = 0;
        } else {
            misses += 1;
            if misses == 1000 {
                side *= 1.5;
                misses = 0;
            }
        }
    }
    centers
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_blob_all_zero_labels() {
        let ds = make_blobs(25, 1, 3, 1.0, 4).unwrap();
        assert_eq!((ds.n(), ds.d()), (25, 3));
        assert!(ds.labels().unwrap().iter().all(|&l| l == 0));
    }

    #[test]
    fn deterministic_per_seed() {
        assert_eq!(
            make_blobs(10, 3, 2, 0.5, 9).unwrap(),
            make_blobs(10, 3, 2, 0.5, 9).unwrap()
        );
        assert_ne!(
            make_blobs(10, 3, 2, 0.5, 9).unwrap(),
            make_blobs(10, 3, 2, 0.5, 10).unwrap()
        );
    }

    #[test]
    fn centers_respect_separation() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (k, d) in [(10, 2), (25, 1), (6, 5)] {
            let c = place_centers(&mut rng, k, d, 0.7);
            for i in 0..k {
                for j in (i + 1)..k {
                    assert!(euclidean(&c[i], &c[j]) >= 8.0 * 0.7);
                }
            }
        }
    }

    #[test]
    fn spec_parsing() {
        let s = BlobSpec::parse("blobs:n=600,k=3,d=2,spread=0.5").unwrap();
        assert_eq!(
            s,
            BlobSpec {
                n: 600,
                k: 3,
                d: 2,
                spread: 0.5,
                seed: None
            }
        );
        let s = BlobSpec::parse("blobs:n=10,k=3,d=1,spread=2,seed=5").unwrap();
        assert_eq!(s.seed, Some(5));
        let ds = s.generate(0).unwrap();
        let mut counts = [0; 3];
        ds.labels().unwrap().iter().for_each(|&l| counts[l] += 1);
        assert_eq!(counts, [4, 3, 3]);

        for bad in [
            "gauss:n=1",
            "blobs:n=5,k=2,d=2",
            "blobs:n=x,k=2,d=2,spread=1",
            "blobs:n=5,k=2,d=2,spread=-1",
            "blobs:n=2,k=3,d=1,spread=1",
            "blobs:n=5,k=2,d=2,spread=1,q=3",
        ] {
            assert!(BlobSpec::parse(bad).is_err(), "{bad}");
        }
    }
}
