//! Cluster validity indices.
//!
//! External (against ground truth): error rate under the best one-to-one
//! label matching, Rand, adjusted Rand and Hubert. Internal (geometry only):
//! silhouette, Davies–Bouldin and CS.

mod internal;
mod matching;
mod pairs;

pub use internal::{cs_measure, davies_bouldin, silhouette};
pub use matching::{error_rate, max_agreement};
pub use pairs::{adjusted_rand, hubert_index, pair_counts, rand_index, PairCounts};

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::clustering::Clustering;
use crate::dataset::Dataset;
use crate::{Error, Result};

/// Every index reported per run, in table column order.
///
/// In JSON, non-finite values (a degenerate DB or CS) are written as the
/// strings `"inf"`, `"-inf"` or `"nan"`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricBundle {
    #[serde(rename = "CS", with = "json_float")]
    pub cs: f64,
    #[serde(rename = "ARI", with = "json_float")]
    pub ari: f64,
    #[serde(rename = "RI", with = "json_float")]
    pub ri: f64,
    #[serde(rename = "HI", with = "json_float")]
    pub hi: f64,
    #[serde(rename = "SIL", with = "json_float")]
    pub sil: f64,
    #[serde(rename = "DB", with = "json_float")]
    pub db: f64,
    /// Percentage in `[0, 100]`.
    #[serde(with = "json_float")]
    pub err: f64,
}

mod json_float {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_str(&format!("{v}"))
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl MetricBundle {
    pub const HEADER: [&'static str; 7] = ["CS", "ARI", "RI", "HI", "SIL", "DB", "err"];

    pub fn values(&self) -> [f64; 7] {
        [
            self.cs, self.ari, self.ri, self.hi, self.sil, self.db, self.err,
        ]
    }

    pub fn from_values(v: [f64; 7]) -> Self {
        MetricBundle {
            cs: v[0],
            ari: v[1],
            ri: v[2],
            hi: v[3],
            sil: v[4],
            db: v[5],
            err: v[6],
        }
    }

    /// `CS,ARI,RI,HI,SIL,DB,err` at full precision.
    pub fn to_csv_row(&self) -> String {
        self.values()
            .iter()
            .map(|v| format!("{v:?}"))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Scores a clustering against the dataset's ground truth.
    ///
    /// Empty clusters are dropped before the internal indices are computed.
    /// With fewer than two nonempty clusters SIL is 0 and DB, CS are
    /// `+inf`; coincident centroids also give `+inf` for DB and CS.
    pub fn evaluate(ds: &Dataset, clustering: &Clustering) -> Result<Self> {
        let truth = ds.truth().ok_or(Error::MissingTruth)?;
        let labels = &clustering.labels;
        let pc = pair_counts(labels, truth)?;
        let (compact, centroids) = compact(labels, &clustering.centroids);
        let nonempty = centroids.nrows();
        let degenerate = |r: Result<f64>| match r {
            Ok(v) => Ok(v),
            Err(Error::CoincidentCentroids(..)) | Err(Error::SingleCluster) => Ok(f64::INFINITY),
            Err(e) => Err(e),
        };
        let (sil, db, cs) = if nonempty < 2 {
            (0.0, f64::INFINITY, f64::INFINITY)
        } else {
            (
                silhouette(ds, &compact)?,
                degenerate(davies_bouldin(ds, &compact, &centroids))?,
                degenerate(cs_measure(ds, &compact, &centroids))?,
            )
        };
        Ok(MetricBundle {
            cs,
            ari: adjusted_rand(&pc),
            ri: rand_index(&pc),
            hi: hubert_index(&pc),
            sil,
            db,
            err: error_rate(labels, truth)?,
        })
    }
}

/// Renumbers labels so only nonempty clusters remain, keeping their order.
fn compact(labels: &[usize], centroids: &Array2<f64>) -> (Vec<usize>, Array2<f64>) {
    let k = centroids.nrows();
    let mut used = vec![false; k];
    labels.iter().for_each(|&l| used[l] = true);
    let mut map = vec![usize::MAX; k];
    let mut kept = Vec::new();
    for j in 0..k {
        if used[j] {
            map[j] = kept.len();
            kept.push(j);
        }
    }
    let n = centroids.ncols();
    let c = Array2::from_shape_fn((kept.len(), n), |(r, d)| centroids[[kept[r], d]]);
    (labels.iter().map(|&l| map[l]).collect(), c)
}
