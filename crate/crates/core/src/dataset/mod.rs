//! Datasets: ingestion, synthesis and distance geometry.

mod distance;
mod io;
mod mvn;
mod synthetic;

pub use distance::{distance_matrix, euclidean, squared_euclidean, DistanceMatrix};
pub use io::{load_csv, parse_delimited, write_csv, Delimiter};
pub use mvn::{factor_covariance, sample_mvn, CovarianceFactor, MvnSpec};
pub use synthetic::{make_synthetic, synthetic_specs, write_synthetic, SyntheticMeta};

use ndarray::{Array2, ArrayView1};

use crate::{Error, Result};

/// An m×n point matrix with optional ground-truth class labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    points: Array2<f64>,
    truth: Option<Vec<usize>>,
    pub k_hint: Option<usize>,
}

impl Dataset {
    /// Validates and wraps a point matrix.
    ///
    /// Truth labels must cover a contiguous range `0..c`.
    pub fn new(
        name: impl Into<String>,
        points: Array2<f64>,
        truth: Option<Vec<usize>>,
    ) -> Result<Self> {
        let (m, n) = points.dim();
        if m == 0 || n == 0 {
            return Err(Error::InvalidDataset(format!("shape {m}x{n} is empty")));
        }
        if let Some((idx, _)) = points.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidDataset(format!(
                "non-finite value at row {}, column {}",
                idx / n,
                idx % n
            )));
        }
        if let Some(t) = &truth {
            if t.len() != m {
                return Err(Error::LengthMismatch {
                    left: m,
                    right: t.len(),
                });
            }
            let c = t.iter().max().map_or(0, |&x| x + 1);
            let mut seen = vec![false; c];
            for &l in t {
                seen[l] = true;
            }
            if let Some(gap) = seen.iter().position(|s| !s) {
                return Err(Error::InvalidDataset(format!(
                    "truth labels are not contiguous: label {gap} is unused"
                )));
            }
        }
        let k_hint = truth.as_ref().map(|t| t.iter().max().map_or(0, |&x| x + 1));
        Ok(Dataset {
            name: name.into(),
            points,
            truth,
            k_hint,
        })
    }

    pub fn points(&self) -> &Array2<f64> {
        &self.points
    }

    pub fn truth(&self) -> Option<&[usize]> {
        self.truth.as_deref()
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.points.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.points.nrows() == 0
    }

    /// Feature dimension.
    pub fn dim(&self) -> usize {
        self.points.ncols()
    }

    pub fn row(&self, i: usize) -> ArrayView1<'_, f64> {
        self.points.row(i)
    }

    /// Number of distinct truth classes, if labelled.
    pub fn classes(&self) -> Option<usize> {
        self.truth
            .as_ref()
            .map(|t| t.iter().max().map_or(0, |&x| x + 1))
    }
}
