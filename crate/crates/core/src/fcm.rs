//! Fuzzy C-means: objective, alternating membership/center updates, and the fit loop.
//!
//! Used directly as a baseline and, with two clusters, as the local solver that
//! splits granular-balls.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dataset::{euclidean, squared_euclidean, Dataset};
use crate::error::{Error, Result};
use crate::membership::MembershipMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct FcmConfig {
    /// Fuzzifier `m > 1`.
    pub fuzzifier: f64,
    pub max_iter: usize,
    /// Stop once the largest center displacement of an iteration drops below this.
    /// `0.0` runs exactly `max_iter` iterations.
    pub tol: f64,
    pub seed: u64,
}

impl Default for FcmConfig {
    fn default() -> Self {
        Self {
            fuzzifier: 2.0,
            max_iter: 100,
            tol: 1e-6,
            seed: 0,
        }
    }
}

impl FcmConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.fuzzifier.is_finite() && self.fuzzifier > 1.0) {
            return Err(Error::invalid(format!(
                "fuzzifier must be > 1, got {}",
                self.fuzzifier
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::invalid("max_iter must be at least 1"));
        }
        if self.tol.is_nan() || self.tol < 0.0 {
            return Err(Error::invalid(format!(
                "tol must be >= 0, got {}",
                self.tol
            )));
        }
        Ok(())
    }
}

/// `c × d` matrix of cluster prototypes.
#[derive(Debug, Clone, PartialEq)]
pub struct CenterSet {
    centers: Vec<f64>,
    c: usize,
    d: usize,
}

impl CenterSet {
    pub fn new(centers: Vec<f64>, d: usize) -> Result<Self> {
        if d == 0 || centers.is_empty() || centers.len() % d != 0 {
            return Err(Error::invalid(
                "center buffer must hold c >= 1 rows of dimension d >= 1",
            ));
        }
        if centers.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("centers must be finite"));
        }
        let c = centers.len() / d;
        Ok(Self { centers, c, d })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let d = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut buf = Vec::with_capacity(rows.len() * d);
        for r in rows {
            if r.as_ref().len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: r.as_ref().len(),
                });
            }
            buf.extend_from_slice(r.as_ref());
        }
        Self::new(buf, d)
    }

    pub fn c(&self) -> usize {
        self.c
    }

    pub fn d(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn center(&self, i: usize) -> &[f64] {
        &self.centers[i * self.d..(i + 1) * self.d]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.centers.chunks_exact(self.d)
    }

    /// Largest Euclidean displacement between matching rows of two center sets.
    pub fn max_displacement(&self, other: &CenterSet) -> f64 {
        self.iter()
            .zip(other.iter())
            .map(|(a, b)| euclidean(a, b))
            .fold(0.0, f64::max)
    }
}

fn check_centers(dataset: &Dataset, v: &CenterSet) -> Result<()> {
    if v.d() != dataset.d() {
        return Err(Error::DimensionMismatch {
            expected: dataset.d(),
            got: v.d(),
        });
    }
    Ok(())
}

#[inline]
fn pow_m(u: f64, m: f64) -> f64 {
    if m == 2.0 {
        u * u
    } else {
        u.powf(m)
    }
}

/// `J_m(U, V) = Σ_i Σ_j u_ij^m ‖x_j − v_i‖²`.
pub fn objective(dataset: &Dataset, u: &MembershipMatrix, v: &CenterSet, m: f64) -> Result<f64> {
    check_centers(dataset, v)?;
    if u.n() != dataset.n() || u.c() != v.c() {
        return Err(Error::invalid(format!(
            "membership is {}x{}, expected {}x{}",
            u.n(),
            u.c(),
            dataset.n(),
            v.c()
        )));
    }
    let mut total = 0.0;
    for (j, x) in dataset.points().enumerate() {
        for (i, center) in v.iter().enumerate() {
            total += pow_m(u.get(j, i), m) * squared_euclidean(x, center);
        }
    }
    Ok(total)
}

/// Closed-form membership for fixed centers:
/// `u_ij = 1 / Σ_k (d(x_j, v_i) / d(x_j, v_k))^(2/(m−1))`.
///
/// A point sitting exactly on one or more centers shares its membership equally
/// among those centers.
pub fn update_membership(dataset: &Dataset, v: &CenterSet, m: f64) -> Result<MembershipMatrix> {
    check_centers(dataset, v)?;
    if m.is_nan() || m <= 1.0 {
        return Err(Error::invalid(format!("fuzzifier must be > 1, got {m}")));
    }
    Ok(membership_unchecked(dataset, v, m))
}

fn membership_unchecked(dataset: &Dataset, v: &CenterSet, m: f64) -> MembershipMatrix {
    let mut values = vec![0.0; dataset.n() * v.c()];
    fill_memberships(
        dataset.as_flat(),
        &v.centers,
        dataset.d(),
        m,
        &mut values,
        None,
    );
    MembershipMatrix::from_raw(values, dataset.n(), v.c())
}

/// Running sums `Σ_j u_ij^m x_j` and `Σ_j u_ij^m` for a center update.
struct CenterSums {
    sums: Vec<f64>,
    weights: Vec<f64>,
    d: usize,
}

impl CenterSums {
    fn new(c: usize, d: usize) -> Self {
        Self {
            sums: vec![0.0; c * d],
            weights: vec![0.0; c],
            d,
        }
    }

    #[inline]
    fn add(&mut self, row: &[f64], x: &[f64], m: f64) {
        for ((&uij, weight), acc) in row
            .iter()
            .zip(self.weights.iter_mut())
            .zip(self.sums.chunks_exact_mut(self.d))
        {
            let w = if m == 2.0 { uij * uij } else { uij.powf(m) };
            *weight += w;
            for (a, &xv) in acc.iter_mut().zip(x) {
                *a += w * xv;
            }
        }
    }

    fn finish(mut self) -> Result<CenterSet> {
        for (i, (&w, acc)) in self
            .weights
            .iter()
            .zip(self.sums.chunks_exact_mut(self.d))
            .enumerate()
        {
            if w.is_nan() || w <= 0.0 {
                return Err(Error::DegenerateCluster { cluster: i });
            }
            acc.iter_mut().for_each(|v| *v /= w);
        }
        CenterSet::new(self.sums, self.d)
    }
}

/// Write the membership row of every point into `values` (row-major, `n × c`), and
/// accumulate the next center sums into `acc` when given.
///
/// The row kernels are monomorphized per fuzzifier case so `powf` never runs for m = 2.
fn fill_memberships(
    points: &[f64],
    centers: &[f64],
    d: usize,
    m: f64,
    values: &mut [f64],
    acc: Option<&mut CenterSums>,
) {
    let c = centers.len() / d;
    let exponent = 1.0 / (m - 1.0);
    match (c, m == 2.0) {
        (2, true) => two_cluster_rows(points, centers, d, values, acc, |r| r, |u| u * u),
        (2, false) => two_cluster_rows(
            points,
            centers,
            d,
            values,
            acc,
            |r| r.powf(exponent),
            |u| u.powf(m),
        ),
        (_, true) => general_rows(points, centers, d, values, acc, |r| r, |u| u * u),
        (_, false) => general_rows(
            points,
            centers,
            d,
            values,
            acc,
            |r| r.powf(exponent),
            |u| u.powf(m),
        ),
    }
}

#[inline(always)]
fn general_rows(
    points: &[f64],
    centers: &[f64],
    d: usize,
    values: &mut [f64],
    mut acc: Option<&mut CenterSums>,
    ratio_pow: impl Fn(f64) -> f64,
    weight: impl Fn(f64) -> f64,
) {
    let c = centers.len() / d;
    for (row, x) in values.chunks_exact_mut(c).zip(points.chunks_exact(d)) {
        let mut nearest = f64::INFINITY;
        for (s, v) in row.iter_mut().zip(centers.chunks_exact(d)) {
            *s = x.iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum();
            if *s < nearest {
                nearest = *s;
            }
        }
        if nearest == 0.0 {
            let zeros = row.iter().filter(|&&s| s == 0.0).count();
            let share = 1.0 / zeros as f64;
            row.iter_mut()
                .for_each(|u| *u = if *u == 0.0 { share } else { 0.0 });
        } else {
            // Ratios against the nearest center keep every weight in (0, 1].
            let mut total = 0.0;
            for u in row.iter_mut() {
                *u = ratio_pow(nearest / *u);
                total += *u;
            }
            let scale = total.recip();
            row.iter_mut().for_each(|u| *u *= scale);
        }
        if let Some(acc) = acc.as_deref_mut() {
            for ((&uij, w), sums) in row
                .iter()
                .zip(acc.weights.iter_mut())
                .zip(acc.sums.chunks_exact_mut(d))
            {
                let wij = weight(uij);
                *w += wij;
                for (a, &xv) in sums.iter_mut().zip(x) {
                    *a += wij * xv;
                }
            }
        }
    }
}

/// Unrolled `c = 2` form of [`fill_memberships`]. It performs the same floating-point
/// operations in the same order, so results match the general loop bit for bit.
#[inline(always)]
fn two_cluster_rows(
    points: &[f64],
    centers: &[f64],
    d: usize,
    values: &mut [f64],
    acc: Option<&mut CenterSums>,
    ratio_pow: impl Fn(f64) -> f64,
    weight: impl Fn(f64) -> f64,
) {
    let (v0, v1) = centers.split_at(d);
    let (mut w0, mut w1) = (0.0, 0.0);
    let mut sums = vec![0.0; 2 * d];
    let (sum0, sum1) = sums.split_at_mut(d);
    for (row, x) in values.chunks_exact_mut(2).zip(points.chunks_exact(d)) {
        let mut s0 = 0.0;
        let mut s1 = 0.0;
        for ((&xt, &a), &b) in x.iter().zip(v0).zip(v1) {
            s0 += (xt - a) * (xt - a);
            s1 += (xt - b) * (xt - b);
        }
        let (u0, u1) = if s0 == 0.0 || s1 == 0.0 {
            match (s0 == 0.0, s1 == 0.0) {
                (true, true) => (0.5, 0.5),
                (true, false) => (1.0, 0.0),
                _ => (0.0, 1.0),
            }
        } else {
            let nearest = if s1 < s0 { s1 } else { s0 };
            let r0 = ratio_pow(nearest / s0);
            let r1 = ratio_pow(nearest / s1);
            let scale = (r0 + r1).recip();
            (r0 * scale, r1 * scale)
        };
        row[0] = u0;
        row[1] = u1;
        let (a0, a1) = (weight(u0), weight(u1));
        w0 += a0;
        w1 += a1;
        for ((&xt, p), q) in x.iter().zip(sum0.iter_mut()).zip(sum1.iter_mut()) {
            *p += a0 * xt;
            *q += a1 * xt;
        }
    }
    if let Some(acc) = acc {
        acc.weights[0] += w0;
        acc.weights[1] += w1;
        acc.sums.iter_mut().zip(&sums).for_each(|(a, s)| *a += s);
    }
}

/// `v_i = Σ_j u_ij^m x_j / Σ_j u_ij^m`.
pub fn update_centers(dataset: &Dataset, u: &MembershipMatrix, m: f64) -> Result<CenterSet> {
    if u.n() != dataset.n() {
        return Err(Error::invalid(format!(
            "membership has {} rows, dataset has {} points",
            u.n(),
            dataset.n()
        )));
    }
    let mut acc = CenterSums::new(u.c(), dataset.d());
    for (row, x) in u.rows().zip(dataset.points()) {
        acc.add(row, x, m);
    }
    acc.finish()
}

/// Membership for `v` plus the sums that produce the following centers, in one pass.
/// Overwrites `u`, which must be `n × c`.
fn sweep(dataset: &Dataset, v: &CenterSet, m: f64, u: &mut MembershipMatrix) -> CenterSums {
    let mut acc = CenterSums::new(v.c(), dataset.d());
    fill_memberships(
        dataset.as_flat(),
        &v.centers,
        dataset.d(),
        m,
        u.as_flat_mut(),
        Some(&mut acc),
    );
    acc
}

/// Outcome of [`fcm_fit`].
#[derive(Debug, Clone)]
pub struct FcmFit {
    pub membership: MembershipMatrix,
    pub centers: CenterSet,
    pub iterations: usize,
}

/// Alternate center and membership updates until the centers stop moving
/// (displacement `< tol`) or `max_iter` iterations have run.
///
/// Without `init`, the starting centers are `c` distinct points drawn with `config.seed`.
pub fn fcm_fit(
    dataset: &Dataset,
    c: usize,
    config: &FcmConfig,
    init: Option<&CenterSet>,
) -> Result<FcmFit> {
    fcm_fit_observed(dataset, c, config, init, |_, _, _| {})
}

/// [`fcm_fit`] with a callback invoked after every completed iteration
/// (and once for the initial membership, with iteration 0).
pub fn fcm_fit_observed<F>(
    dataset: &Dataset,
    c: usize,
    config: &FcmConfig,
    init: Option<&CenterSet>,
    mut observe: F,
) -> Result<FcmFit>
where
    F: FnMut(usize, &MembershipMatrix, &CenterSet),
{
    config.validate()?;
    if c == 0 || c > dataset.n() {
        return Err(Error::invalid(format!(
            "cluster count c = {c} must be in 1..={}",
            dataset.n()
        )));
    }
    let mut centers = match init {
        Some(v) => {
            check_centers(dataset, v)?;
            if v.c() != c {
                return Err(Error::invalid(format!(
                    "initial centers have {} rows, expected {c}",
                    v.c()
                )));
            }
            v.clone()
        }
        None => sample_centers(dataset, c, config.seed)?,
    };

    let m = config.fuzzifier;
    let mut membership = MembershipMatrix::from_raw(vec![0.0; dataset.n() * c], dataset.n(), c);
    let mut pending = sweep(dataset, &centers, m, &mut membership);
    observe(0, &membership, &centers);

    let mut iterations = 0;
    while iterations < config.max_iter {
        let next = pending.finish()?;
        pending = sweep(dataset, &next, m, &mut membership);
        let shift = next.max_displacement(&centers);
        centers = next;
        iterations += 1;
        observe(iterations, &membership, &centers);
        if shift < config.tol {
            break;
        }
    }
    Ok(FcmFit {
        membership,
        centers,
        iterations,
    })
}

/// `c` distinct dataset rows chosen uniformly without replacement.
pub(crate) fn sample_centers(dataset: &Dataset, c: usize, seed: u64) -> Result<CenterSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picks = sample(&mut rng, dataset.n(), c);
    let mut buf = Vec::with_capacity(c * dataset.d());
    for i in picks.iter() {
        buf.extend_from_slice(dataset.point(i));
    }
    CenterSet::new(buf, dataset.d())
}

/// Per-row argmax; ties resolve to the smallest cluster index.
pub fn hard_labels(u: &MembershipMatrix) -> Vec<usize> {
    u.rows()
        .map(|row| {
            row.iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |best, (i, &v)| {
                    if v > best.1 {
                        (i, v)
                    } else {
                        best
                    }
                })
                .0
        })
        .collect()
}
