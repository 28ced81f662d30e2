//! Lloyd's k-means and fuzzy c-means, started from a [`SeedSet`].

use std::fmt::Write as _;

use ndarray::{Array1, Array2, ArrayView2};

use crate::dataset::{squared_euclidean, Dataset};
use crate::seeding::SeedSet;
use crate::{par, Error, Result};

/// Stopping rules shared by both clusterers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterParams {
    pub max_iterations: usize,
    /// Centroid-shift threshold (k-means) or membership-change threshold
    /// (fuzzy c-means).
    pub tolerance: f64,
    /// Fuzzy exponent, must exceed 1.
    pub fuzzifier: f64,
}

impl Default for ClusterParams {
    fn default() -> Self {
        ClusterParams {
            max_iterations: 300,
            tolerance: 1e-5,
            fuzzifier: 2.0,
        }
    }
}

impl ClusterParams {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::InvalidParams("max_iterations must be >= 1".into()));
        }
        if self.tolerance.is_nan() || self.tolerance < 0.0 {
            return Err(Error::InvalidParams("tolerance must be >= 0".into()));
        }
        if !self.fuzzifier.is_finite() || self.fuzzifier <= 1.0 {
            return Err(Error::InvalidParams("fuzzifier must be > 1".into()));
        }
        Ok(())
    }
}

/// Result of a clustering run.
#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    pub labels: Vec<usize>,
    pub centroids: Array2<f64>,
    /// Row-stochastic m×k memberships (fuzzy c-means only).
    pub membership: Option<Array2<f64>>,
    /// Number of centroid updates performed.
    pub iterations: usize,
    pub converged: bool,
    /// Within-cluster sum of squares after each update (k-means only).
    pub objective: Vec<f64>,
}

impl Clustering {
    pub fn k(&self) -> usize {
        self.centroids.nrows()
    }

    /// A hard partition given externally, with each centroid the mean of
    /// its members. Labels without members get a zero centroid and are
    /// dropped again by the validity indices.
    pub fn from_labels(ds: &Dataset, labels: Vec<usize>) -> Result<Self> {
        if labels.len() != ds.len() {
            return Err(Error::LengthMismatch {
                left: ds.len(),
                right: labels.len(),
            });
        }
        let k = labels.iter().max().map_or(0, |&l| l + 1);
        let centroids = update_means(ds.points().view(), &labels, &Array2::zeros((k, ds.dim())));
        Ok(Clustering {
            labels,
            centroids,
            membership: None,
            iterations: 0,
            converged: true,
            objective: Vec::new(),
        })
    }

    /// One row per point: label, then membership values when present.
    /// A `#centroids` line follows, then one row per centroid.
    pub fn to_delimited(&self) -> String {
        let mut out = String::new();
        for (i, l) in self.labels.iter().enumerate() {
            write!(out, "{l}").unwrap();
            if let Some(u) = &self.membership {
                for v in u.row(i) {
                    write!(out, ",{v:?}").unwrap();
                }
            }
            out.push('\n');
        }
        out.push_str("#centroids\n");
        for row in self.centroids.rows() {
            let vals: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
            out.push_str(&vals.join(","));
            out.push('\n');
        }
        out
    }

    /// Reads labels, memberships and centroids written by
    /// [`Clustering::to_delimited`]. Iteration metadata is not stored.
    pub fn from_delimited(text: &str) -> Result<Self> {
        let bad = |m: String| Error::Format(format!("clustering: {m}"));
        let (body, cents) = text
            .split_once("#centroids\n")
            .ok_or_else(|| bad("missing #centroids marker".into()))?;
        let mut labels = Vec::new();
        let mut memb: Vec<Vec<f64>> = Vec::new();
        for (row, line) in body.lines().filter(|l| !l.trim().is_empty()).enumerate() {
            let mut fields = line.split(',');
            let l = fields
                .next()
                .and_then(|s| s.trim().parse::<usize>().ok())
                .ok_or_else(|| bad(format!("row {}: bad label", row + 1)))?;
            labels.push(l);
            let u: Vec<f64> = fields
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| bad(format!("row {}: bad membership", row + 1)))?;
            memb.push(u);
        }
        let rows: Vec<Vec<f64>> = cents
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| l.split(',').map(|s| s.trim().parse::<f64>()).collect())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad("bad centroid".into()))?;
        let k = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        let centroids =
            Array2::from_shape_vec((k, n), rows.concat()).map_err(|e| bad(e.to_string()))?;
        let membership = if memb.iter().all(Vec::is_empty) {
            None
        } else {
            if memb.iter().any(|u| u.len() != k) {
                return Err(bad("membership width differs from k".into()));
            }
            Some(
                Array2::from_shape_vec((labels.len(), k), memb.concat())
                    .map_err(|e| bad(e.to_string()))?,
            )
        };
        Ok(Clustering {
            labels,
            centroids,
            membership,
            iterations: 0,
            converged: false,
            objective: Vec::new(),
        })
    }
}

/// Nearest-centroid label for every point, lowest index on ties.
pub fn assign(points: ArrayView2<'_, f64>, centroids: ArrayView2<'_, f64>) -> Vec<usize> {
    par::map_range(points.nrows(), |i| nearest(points, centroids, i).0)
}

fn nearest(points: ArrayView2<'_, f64>, centroids: ArrayView2<'_, f64>, i: usize) -> (usize, f64) {
    let x = points.row(i);
    let mut best = (0, squared_euclidean(x, centroids.row(0)));
    for j in 1..centroids.nrows() {
        let d = squared_euclidean(x, centroids.row(j));
        if d < best.1 {
            best = (j, d);
        }
    }
    best
}

fn check_seeds(ds: &Dataset, seeds: &SeedSet) -> Result<()> {
    let k = seeds.k();
    if k == 0 || k > ds.len() {
        return Err(Error::InvalidK { k, m: ds.len() });
    }
    if seeds.centroids.ncols() != ds.dim() {
        return Err(Error::InvalidParams(format!(
            "seed dimension {} differs from data dimension {}",
            seeds.centroids.ncols(),
            ds.dim()
        )));
    }
    Ok(())
}

/// Member means; clusters without members keep their previous centroid.
fn update_means(points: ArrayView2<'_, f64>, labels: &[usize], prev: &Array2<f64>) -> Array2<f64> {
    let (k, n) = prev.dim();
    let mut sums = Array2::<f64>::zeros((k, n));
    let mut counts = vec![0usize; k];
    for (i, &l) in labels.iter().enumerate() {
        counts[l] += 1;
        let mut row = sums.row_mut(l);
        row += &points.row(i);
    }
    for (j, &c) in counts.iter().enumerate() {
        if c == 0 {
            sums.row_mut(j).assign(&prev.row(j));
        } else {
            sums.row_mut(j).mapv_inplace(|v| v / c as f64);
        }
    }
    sums
}

/// Moves the point farthest from its own centroid into each empty cluster.
fn repair_empty(points: ArrayView2<'_, f64>, centroids: &Array2<f64>, labels: &mut [usize]) {
    let k = centroids.nrows();
    loop {
        let mut counts = vec![0usize; k];
        labels.iter().for_each(|&l| counts[l] += 1);
        let Some(empty) = counts.iter().position(|&c| c == 0) else {
            return;
        };
        let mut far: Option<(usize, f64)> = None;
        for (i, &l) in labels.iter().enumerate() {
            if counts[l] < 2 {
                continue;
            }
            let d = squared_euclidean(points.row(i), centroids.row(l));
            if far.is_none_or(|(_, best)| d > best) {
                far = Some((i, d));
            }
        }
        match far {
            Some((i, _)) => labels[i] = empty,
            None => return,
        }
    }
}

fn wcss(points: ArrayView2<'_, f64>, centroids: &Array2<f64>, labels: &[usize]) -> f64 {
    labels
        .iter()
        .enumerate()
        .map(|(i, &l)| squared_euclidean(points.row(i), centroids.row(l)))
        .sum()
}

/// Lloyd's algorithm.
///
/// Each iteration assigns points, repairs empty clusters, and recomputes the
/// means. It stops when the assignment repeats exactly, when no centroid
/// moves by `tolerance` or more, or after `max_iterations` updates.
pub fn kmeans(ds: &Dataset, seeds: &SeedSet, params: &ClusterParams) -> Result<Clustering> {
    params.validate()?;
    check_seeds(ds, seeds)?;
    let x = ds.points().view();
    let mut centroids = seeds.centroids.clone();
    let mut labels: Option<Vec<usize>> = None;
    let mut objective = Vec::new();
    let mut iterations = 0;
    let mut converged = false;

    while iterations < params.max_iterations {
        let mut next = assign(x, centroids.view());
        repair_empty(x, &centroids, &mut next);
        if labels.as_ref() == Some(&next) {
            converged = true;
            break;
        }
        let updated = update_means(x, &next, &centroids);
        let shift = centroids
            .rows()
            .into_iter()
            .zip(updated.rows())
            .map(|(a, b)| squared_euclidean(a, b).sqrt())
            .fold(0.0, f64::max);
        centroids = updated;
        iterations += 1;
        objective.push(wcss(x, &centroids, &next));
        labels = Some(next);
        if shift < params.tolerance {
            converged = true;
            break;
        }
    }

    let labels = assign(x, centroids.view());
    Ok(Clustering {
        labels,
        centroids,
        membership: None,
        iterations,
        converged,
        objective,
    })
}

/// Memberships for every point against `centroids`.
///
/// A point that coincides with a centroid gets an indicator row on the first
/// such centroid.
fn memberships(
    points: ArrayView2<'_, f64>,
    centroids: &Array2<f64>,
    fuzzifier: f64,
) -> Array2<f64> {
    let k = centroids.nrows();
    let exponent = 1.0 / (fuzzifier - 1.0);
    let rows: Vec<Vec<f64>> = par::map_range(points.nrows(), |i| {
        let d2: Vec<f64> = (0..k)
            .map(|j| squared_euclidean(points.row(i), centroids.row(j)))
            .collect();
        if let Some(z) = d2.iter().position(|&d| d == 0.0) {
            let mut row = vec![0.0; k];
            row[z] = 1.0;
            return row;
        }
        // scale by the nearest distance so the powers stay representable
        let dmin = d2.iter().copied().fold(f64::INFINITY, f64::min);
        let w: Vec<f64> = d2.iter().map(|d| (dmin / d).powf(exponent)).collect();
        let total: f64 = w.iter().sum();
        w.into_iter().map(|v| v / total).collect()
    });
    Array2::from_shape_fn((points.nrows(), k), |(i, j)| rows[i][j])
}

fn weighted_means(
    points: ArrayView2<'_, f64>,
    u: &Array2<f64>,
    fuzzifier: f64,
    prev: &Array2<f64>,
) -> Array2<f64> {
    let (k, n) = prev.dim();
    let mut out = Array2::<f64>::zeros((k, n));
    for j in 0..k {
        let mut num = Array1::<f64>::zeros(n);
        let mut den = 0.0;
        for i in 0..points.nrows() {
            let w = u[[i, j]].powf(fuzzifier);
            if w > 0.0 {
                num.scaled_add(w, &points.row(i));
                den += w;
            }
        }
        if den > 0.0 {
            out.row_mut(j).assign(&(num / den));
        } else {
            out.row_mut(j).assign(&prev.row(j));
        }
    }
    out
}

fn row_argmax(u: &Array2<f64>) -> Vec<usize> {
    u.rows()
        .into_iter()
        .map(|r| {
            let mut best = 0;
            for j in 1..r.len() {
                if r[j] > r[best] {
                    best = j;
                }
            }
            best
        })
        .collect()
}

/// Fuzzy c-means with squared Euclidean distances.
///
/// Alternates the membership update `u_ij ∝ (1/‖x_i − c_j‖²)^(1/(m_f − 1))`
/// with the weighted centroid update until the largest membership change is
/// below `tolerance` or `max_iterations` updates were made. Hard labels are
/// the row-wise argmax.
pub fn fuzzy_cmeans(ds: &Dataset, seeds: &SeedSet, params: &ClusterParams) -> Result<Clustering> {
    params.validate()?;
    check_seeds(ds, seeds)?;
    let x = ds.points().view();
    let mf = params.fuzzifier;
    let mut centroids = seeds.centroids.clone();
    let mut u = memberships(x, &centroids, mf);
    let mut iterations = 0;
    let mut converged = false;

    while iterations < params.max_iterations {
        centroids = weighted_means(x, &u, mf, &centroids);
        iterations += 1;
        let next = memberships(x, &centroids, mf);
        let change = next
            .iter()
            .zip(u.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        u = next;
        if change < params.tolerance {
            converged = true;
            break;
        }
    }

    Ok(Clustering {
        labels: row_argmax(&u),
        centroids,
        membership: Some(u),
        iterations,
        converged,
        objective: Vec::new(),
    })
}
