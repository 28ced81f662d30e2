//! Initial centroid selection.
//!
//! Four initializers are provided, all of which pick actual data points:
//!
//! * [`seed_spss`]: single-pass density seeding. The first seed is the point
//!   with the smallest summed distance to every other point. A budget `y` is
//!   derived once from that point's `⌊m/k⌋` nearest neighbours, and each
//!   further seed is the first point (in dataset order) at which the running
//!   sum of squared nearest-seed distances exceeds `y`. No randomness.
//! * [`seed_kmeanspp`]: k-means++ (uniform first seed, then D² sampling by a
//!   prefix-sum scan).
//! * [`seed_kkz`]: largest-norm first seed, then farthest-from-nearest-seed.
//! * [`seed_random`]: `k` distinct points uniformly without replacement.
//!
//! Every argmin/argmax resolves ties to the lowest index.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use ndarray::Array2;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{distance_matrix, squared_euclidean, Dataset, DistanceMatrix};
use crate::{Error, Result};

/// Which initializer produced a [`SeedSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "spss")]
    Spss,
    #[serde(rename = "kmeans++")]
    KmeansPlusPlus,
    #[serde(rename = "kkz")]
    Kkz,
    #[serde(rename = "random")]
    Random,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Spss => "spss",
            Method::KmeansPlusPlus => "kmeans++",
            Method::Kkz => "kkz",
            Method::Random => "random",
        }
    }

    pub fn is_stochastic(self) -> bool {
        matches!(self, Method::KmeansPlusPlus | Method::Random)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "spss" => Ok(Method::Spss),
            "kmeans++" | "k-means++" | "kmeanspp" => Ok(Method::KmeansPlusPlus),
            "kkz" => Ok(Method::Kkz),
            "random" => Ok(Method::Random),
            other => Err(Error::InvalidParams(format!(
                "unknown seeding method {other:?}"
            ))),
        }
    }
}

/// An ordered set of `k` initial centroids, each a copy of a dataset row.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedSet {
    pub centroids: Array2<f64>,
    pub source_indices: Vec<usize>,
    pub method: Method,
    pub rng_seed: Option<u64>,
}

impl SeedSet {
    fn from_indices(ds: &Dataset, indices: Vec<usize>, method: Method) -> Self {
        let n = ds.dim();
        let centroids =
            Array2::from_shape_fn((indices.len(), n), |(j, c)| ds.points()[[indices[j], c]]);
        SeedSet {
            centroids,
            source_indices: indices,
            method,
            rng_seed: None,
        }
    }

    /// Records the seed of the stream that produced this set.
    pub fn with_rng_seed(mut self, seed: u64) -> Self {
        self.rng_seed = Some(seed);
        self
    }

    pub fn k(&self) -> usize {
        self.source_indices.len()
    }

    /// Line-oriented text record:
    ///
    /// ```text
    /// method=spss
    /// k=2
    /// rng_seed=none
    /// indices=2,0
    /// centroid=2.0
    /// centroid=0.0
    /// ```
    ///
    /// Coordinates use shortest round-trip formatting.
    pub fn to_record(&self) -> String {
        let mut out = String::new();
        writeln!(out, "method={}", self.method).unwrap();
        writeln!(out, "k={}", self.k()).unwrap();
        match self.rng_seed {
            Some(s) => writeln!(out, "rng_seed={s}").unwrap(),
            None => writeln!(out, "rng_seed=none").unwrap(),
        }
        let idx: Vec<String> = self.source_indices.iter().map(|i| i.to_string()).collect();
        writeln!(out, "indices={}", idx.join(",")).unwrap();
        for row in self.centroids.rows() {
            let vals: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
            writeln!(out, "centroid={}", vals.join(",")).unwrap();
        }
        out
    }

    /// Parses the output of [`SeedSet::to_record`].
    pub fn from_record(text: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Format(format!("seed record: {msg}"));
        let mut method = None;
        let mut k = None;
        let mut rng_seed = None;
        let mut indices = None;
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let (key, value) = line.split_once('=').ok_or_else(|| bad(line))?;
            match key.trim() {
                "method" => method = Some(value.parse::<Method>()?),
                "k" => k = Some(value.trim().parse::<usize>().map_err(|_| bad("k"))?),
                "rng_seed" => {
                    rng_seed = match value.trim() {
                        "none" => None,
                        s => Some(s.parse::<u64>().map_err(|_| bad("rng_seed"))?),
                    }
                }
                "indices" => {
                    indices = Some(
                        value
                            .split(',')
                            .map(|s| s.trim().parse::<usize>())
                            .collect::<std::result::Result<Vec<_>, _>>()
                            .map_err(|_| bad("indices"))?,
                    )
                }
                "centroid" => rows.push(
                    value
                        .split(',')
                        .map(|s| s.trim().parse::<f64>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|_| bad("centroid"))?,
                ),
                other => return Err(bad(&format!("unknown key {other:?}"))),
            }
        }
        let method = method.ok_or_else(|| bad("missing method"))?;
        let indices: Vec<usize> = indices.ok_or_else(|| bad("missing indices"))?;
        let k = k.ok_or_else(|| bad("missing k"))?;
        if indices.len() != k || rows.len() != k {
            return Err(bad("k does not match indices/centroids"));
        }
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(bad("ragged centroids"));
        }
        let centroids =
            Array2::from_shape_vec((k, n), rows.concat()).map_err(|e| bad(&e.to_string()))?;
        Ok(SeedSet {
            centroids,
            source_indices: indices,
            method,
            rng_seed,
        })
    }
}

/// Row sums of the distance matrix and the index of the smallest one.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityProfile {
    pub sumv: Vec<f64>,
    /// Highest-density point: argmin of `sumv`, lowest index on ties.
    pub h: usize,
}

/// Sums every row of `dist`.
pub fn sumv(dist: &DistanceMatrix) -> DensityProfile {
    let sumv: Vec<f64> = (0..dist.len()).map(|i| dist.row(i).sum()).collect();
    let h = argmin(&sumv);
    DensityProfile { sumv, h }
}

fn argmin(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate().skip(1) {
        if *x < v[best] {
            best = i;
        }
    }
    best
}

fn check_k(ds: &Dataset, k: usize) -> Result<()> {
    if k == 0 || k > ds.len() {
        return Err(Error::InvalidK { k, m: ds.len() });
    }
    Ok(())
}

/// Options for [`seed_spss_with`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SpssOptions {
    /// Square the neighbour distances when forming the budget `y`, so it is
    /// in the same units as the scanned sum of squared distances.
    pub squared_y: bool,
}

/// Single-pass density seeding with default options.
pub fn seed_spss(ds: &Dataset, k: usize) -> Result<SeedSet> {
    seed_spss_with(ds, k, SpssOptions::default())
}

pub fn seed_spss_with(ds: &Dataset, k: usize, opts: SpssOptions) -> Result<SeedSet> {
    check_k(ds, k)?;
    let dist = distance_matrix(ds);
    let indices = spss_indices(&dist, k, opts);
    Ok(SeedSet::from_indices(ds, indices, Method::Spss))
}

/// Seeding budget: summed distance from `h` to its `⌊m/k⌋` nearest other points.
pub fn spss_budget(dist: &DistanceMatrix, h: usize, k: usize, opts: SpssOptions) -> f64 {
    let m = dist.len();
    let mut others: Vec<f64> = (0..m).filter(|&j| j != h).map(|j| dist.get(h, j)).collect();
    others.sort_by(f64::total_cmp);
    let take = (m / k).min(others.len());
    others[..take]
        .iter()
        .map(|d| if opts.squared_y { d * d } else { *d })
        .sum()
}

/// SPSS on a precomputed distance matrix; returns the chosen row indices.
pub fn spss_indices(dist: &DistanceMatrix, k: usize, opts: SpssOptions) -> Vec<usize> {
    let m = dist.len();
    let h = sumv(dist).h;
    let y = spss_budget(dist, h, k, opts);

    let mut chosen = vec![false; m];
    let mut indices = Vec::with_capacity(k);
    chosen[h] = true;
    indices.push(h);
    let mut nearest: Vec<f64> = dist.row(h).to_vec();

    while indices.len() < k {
        let mut acc = 0.0;
        let mut pick = None;
        for i in (0..m).filter(|&i| !chosen[i]) {
            acc += nearest[i] * nearest[i];
            if acc > y {
                pick = Some(i);
                break;
            }
        }
        // budget never exceeded: fall back to the farthest unchosen point
        let pick = pick.unwrap_or_else(|| farthest_unchosen(&nearest, &chosen));
        chosen[pick] = true;
        indices.push(pick);
        for (i, d) in nearest.iter_mut().enumerate() {
            *d = d.min(dist.get(i, pick));
        }
    }
    indices
}

fn farthest_unchosen(nearest: &[f64], chosen: &[bool]) -> usize {
    let mut best: Option<usize> = None;
    for i in (0..nearest.len()).filter(|&i| !chosen[i]) {
        if best.is_none_or(|b| nearest[i] > nearest[b]) {
            best = Some(i);
        }
    }
    best.expect("k <= m leaves an unchosen point")
}

/// k-means++ seeding.
pub fn seed_kmeanspp<R: Rng + ?Sized>(ds: &Dataset, k: usize, rng: &mut R) -> Result<SeedSet> {
    check_k(ds, k)?;
    let first = rng.random_range(0..ds.len());
    seed_kmeanspp_from(ds, k, first, rng)
}

/// k-means++ with the first seed pinned to `first`.
pub fn seed_kmeanspp_from<R: Rng + ?Sized>(
    ds: &Dataset,
    k: usize,
    first: usize,
    rng: &mut R,
) -> Result<SeedSet> {
    check_k(ds, k)?;
    let m = ds.len();
    if first >= m {
        return Err(Error::InvalidParams(format!(
            "first seed {first} out of range"
        )));
    }
    let x = ds.points();
    let mut chosen = vec![false; m];
    let mut indices = vec![first];
    chosen[first] = true;
    let mut d2: Vec<f64> = (0..m)
        .map(|i| squared_euclidean(x.row(i), x.row(first)))
        .collect();

    while indices.len() < k {
        let total: f64 = (0..m).filter(|&i| !chosen[i]).map(|i| d2[i]).sum();
        let pick = if total > 0.0 {
            let y = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut pick = None;
            let mut last_positive = None;
            for i in (0..m).filter(|&i| !chosen[i]) {
                acc += d2[i];
                if d2[i] > 0.0 {
                    last_positive = Some(i);
                }
                if acc > y {
                    pick = Some(i);
                    break;
                }
            }
            // rounding can leave y at the very top of the range
            pick.or(last_positive)
                .expect("positive total has a positive term")
        } else {
            // every remaining point coincides with a seed
            let free: Vec<usize> = (0..m).filter(|&i| !chosen[i]).collect();
            free[rng.random_range(0..free.len())]
        };
        chosen[pick] = true;
        indices.push(pick);
        for (i, d) in d2.iter_mut().enumerate() {
            *d = d.min(squared_euclidean(x.row(i), x.row(pick)));
        }
    }
    Ok(SeedSet::from_indices(ds, indices, Method::KmeansPlusPlus))
}

/// KKZ seeding.
pub fn seed_kkz(ds: &Dataset, k: usize) -> Result<SeedSet> {
    check_k(ds, k)?;
    let m = ds.len();
    let x = ds.points();
    let norms: Vec<f64> = x.rows().into_iter().map(|r| r.dot(&r)).collect();
    let mut first = 0;
    for i in 1..m {
        if norms[i] > norms[first] {
            first = i;
        }
    }
    let mut chosen = vec![false; m];
    chosen[first] = true;
    let mut indices = vec![first];
    let mut nearest: Vec<f64> = (0..m)
        .map(|i| squared_euclidean(x.row(i), x.row(first)))
        .collect();
    while indices.len() < k {
        let pick = farthest_unchosen(&nearest, &chosen);
        chosen[pick] = true;
        indices.push(pick);
        for (i, d) in nearest.iter_mut().enumerate() {
            *d = d.min(squared_euclidean(x.row(i), x.row(pick)));
        }
    }
    Ok(SeedSet::from_indices(ds, indices, Method::Kkz))
}

/// `k` distinct points drawn uniformly without replacement.
pub fn seed_random<R: Rng + ?Sized>(ds: &Dataset, k: usize, rng: &mut R) -> Result<SeedSet> {
    check_k(ds, k)?;
    let indices = rand::seq::index::sample(rng, ds.len(), k).into_vec();
    Ok(SeedSet::from_indices(ds, indices, Method::Random))
}

/// Dispatches on `method`. Deterministic methods ignore `rng`.
pub fn seed_with<R: Rng + ?Sized>(
    method: Method,
    ds: &Dataset,
    k: usize,
    rng: &mut R,
) -> Result<SeedSet> {
    match method {
        Method::Spss => seed_spss(ds, k),
        Method::KmeansPlusPlus => seed_kmeanspp(ds, k, rng),
        Method::Kkz => seed_kkz(ds, k),
        Method::Random => seed_random(ds, k, rng),
    }
}
