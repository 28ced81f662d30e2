use ndarray::Array2;

use crate::dataset::{euclidean, Dataset};
use crate::{par, Error, Result};

/// Members of each cluster `0..k`, erroring on empty clusters or stray labels.
fn members(labels: &[usize], k: usize) -> Result<Vec<Vec<usize>>> {
    let mut groups = vec![Vec::new(); k];
    for (i, &l) in labels.iter().enumerate() {
        if l >= k {
            return Err(Error::InvalidParams(format!("label {l} >= k = {k}")));
        }
        groups[l].push(i);
    }
    if let Some(j) = groups.iter().position(Vec::is_empty) {
        return Err(Error::EmptyCluster(j));
    }
    Ok(groups)
}

fn check_len(ds: &Dataset, labels: &[usize]) -> Result<()> {
    if ds.len() != labels.len() {
        return Err(Error::LengthMismatch {
            left: ds.len(),
            right: labels.len(),
        });
    }
    Ok(())
}

/// Mean silhouette width.
///
/// Singleton clusters contribute 0, as does a point whose `a` and `b` are
/// both zero.
pub fn silhouette(ds: &Dataset, labels: &[usize]) -> Result<f64> {
    check_len(ds, labels)?;
    let k = labels.iter().max().map_or(0, |&x| x + 1);
    if k < 2 {
        return Err(Error::SingleCluster);
    }
    let groups = members(labels, k)?;
    let x = ds.points();
    let widths = par::map_range(ds.len(), |i| {
        let own = labels[i];
        if groups[own].len() == 1 {
            return 0.0;
        }
        let mut sums = vec![0.0; k];
        for (j, &l) in labels.iter().enumerate() {
            if j != i {
                sums[l] += euclidean(x.row(i), x.row(j));
            }
        }
        let a = sums[own] / (groups[own].len() - 1) as f64;
        let b = (0..k)
            .filter(|&c| c != own)
            .map(|c| sums[c] / groups[c].len() as f64)
            .fold(f64::INFINITY, f64::min);
        let denom = a.max(b);
        if denom == 0.0 {
            0.0
        } else {
            (b - a) / denom
        }
    });
    Ok(widths.iter().sum::<f64>() / widths.len() as f64)
}

fn centroid_gap(centroids: &Array2<f64>, i: usize, j: usize) -> Result<f64> {
    let d = euclidean(centroids.row(i), centroids.row(j));
    if d == 0.0 {
        return Err(Error::CoincidentCentroids(i, j));
    }
    Ok(d)
}

fn check_centroids(ds: &Dataset, centroids: &Array2<f64>) -> Result<usize> {
    let k = centroids.nrows();
    if k < 2 {
        return Err(Error::SingleCluster);
    }
    if centroids.ncols() != ds.dim() {
        return Err(Error::InvalidParams(
            "centroid dimension differs from data".into(),
        ));
    }
    Ok(k)
}

/// Davies–Bouldin index with scatter `S_i` = mean member distance to `c_i`.
pub fn davies_bouldin(ds: &Dataset, labels: &[usize], centroids: &Array2<f64>) -> Result<f64> {
    check_len(ds, labels)?;
    let k = check_centroids(ds, centroids)?;
    let groups = members(labels, k)?;
    let x = ds.points();
    let scatter: Vec<f64> = groups
        .iter()
        .enumerate()
        .map(|(c, g)| {
            g.iter()
                .map(|&i| euclidean(x.row(i), centroids.row(c)))
                .sum::<f64>()
                / g.len() as f64
        })
        .collect();
    let mut total = 0.0;
    for i in 0..k {
        let mut worst = 0.0f64;
        for j in (0..k).filter(|&j| j != i) {
            worst = worst.max((scatter[i] + scatter[j]) / centroid_gap(centroids, i, j)?);
        }
        total += worst;
    }
    Ok(total / k as f64)
}

/// CS measure: mean within-cluster diameter-per-point summed over clusters,
/// divided by the summed nearest-centroid separations.
pub fn cs_measure(ds: &Dataset, labels: &[usize], centroids: &Array2<f64>) -> Result<f64> {
    check_len(ds, labels)?;
    let k = check_centroids(ds, centroids)?;
    let groups = members(labels, k)?;
    let x = ds.points();
    let spreads = par::map_slice(&groups, |g| {
        g.iter()
            .map(|&i| {
                g.iter()
                    .map(|&j| euclidean(x.row(i), x.row(j)))
                    .fold(0.0, f64::max)
            })
            .sum::<f64>()
            / g.len() as f64
    });
    let numerator: f64 = spreads.iter().sum();
    let mut denominator = 0.0;
    for i in 0..k {
        let mut nearest = f64::INFINITY;
        for j in (0..k).filter(|&j| j != i) {
            nearest = nearest.min(centroid_gap(centroids, i, j)?);
        }
        denominator += nearest;
    }
    Ok(numerator / denominator)
}
