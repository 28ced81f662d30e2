use std::fs;
use std::path::{Path, PathBuf};

use ndarray::{array, Array1, Array2};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::io::{to_delimited, Delimiter};
use super::mvn::{sample_mvn, MvnSpec};
use super::Dataset;
use crate::{rng, Error, Result};

type Component = (Array1<f64>, Array2<f64>);

/// Component parameters of synthetic dataset `id` (1..=5), with the equal-split
/// per-cluster counts.
pub fn synthetic_specs(id: u32) -> Result<Vec<MvnSpec>> {
    let (m, comps): (usize, Vec<Component>) = match id {
        1 => (
            350,
            vec![
                (
                    array![2.0, 3.0, 4.0],
                    array![[1.0, 0.50, 0.3333], [0.0, 1.0, 0.6667], [0.0, 0.0, 1.0]],
                ),
                (
                    array![7.0, 6.0, 9.0],
                    array![[1.0, 1.0, 1.0], [0.0, 2.0, 2.0], [0.0, 0.0, 3.0]],
                ),
            ],
        ),
        2 => (
            400,
            vec![
                (array![-1.0, -1.0], diag2(0.65)),
                (array![2.0, 2.0], array![[1.0, 0.7], [0.0, 1.0]]),
                (array![-3.0, 3.0], diag2(0.78)),
                (array![-6.0, 4.0], diag2(0.5)),
            ],
        ),
        3 => (
            300,
            vec![
                (array![-1.0, -1.0], diag2(1.0)),
                (array![2.0, 2.0], diag2(1.0)),
                (array![-3.0, 3.0], diag2(0.7)),
            ],
        ),
        4 => (
            800,
            vec![
                (array![-1.0, -1.0], diag2(0.65)),
                (array![-8.0, -6.0], array![[1.0, 0.7], [0.0, 1.0]]),
                (array![-3.0, 6.0], diag2(0.2)),
                (array![-8.0, 14.0], diag2(0.5)),
                (array![10.0, 12.0], diag2(0.3)),
                (array![14.0, -14.0], diag2(0.1)),
            ],
        ),
        5 => (
            180,
            vec![
                (
                    array![1.0, 1.0, 2.0, 1.0, 0.5, 2.0, 1.0, 0.5],
                    upper8(&[
                        &[1.0, 0.5, 0.333, 0.25, 0.2, 0.1667, 0.1429, 0.125],
                        &[1.0, 0.667, 0.5, 0.4, 0.3333, 0.2857, 0.25],
                        &[1.0, 0.75, 0.6, 0.5, 0.4286, 0.375],
                        &[1.0, 0.8, 0.6667, 0.5714, 0.5],
                        &[1.0, 0.8333, 0.7143, 0.625],
                        &[1.0, 0.8571, 0.75],
                        &[1.0, 0.875],
                        &[1.0],
                    ]),
                ),
                (
                    Array1::ones(8),
                    Array2::from_shape_fn((8, 8), |(i, j)| (i.min(j) + 1) as f64),
                ),
                (
                    array![1.0, -2.0, 0.0, -1.0, 0.0, -1.0, -2.0, -2.0],
                    upper8(&[
                        &[1.0, -1.0, -1.0, -1.0, -1.0, -1.0, -1.0, -1.0],
                        &[2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
                        &[3.0, 1.0, 1.0, 1.0, 1.0, 1.0],
                        &[4.0, 2.0, 2.0, 2.0, 2.0],
                        &[5.0, 3.0, 3.0, 3.0],
                        &[6.0, 4.0, 4.0],
                        &[7.0, 5.0],
                        &[8.0],
                    ]),
                ),
            ],
        ),
        other => return Err(Error::UnknownSynthetic(other)),
    };
    let k = comps.len();
    comps
        .into_iter()
        .enumerate()
        .map(|(j, (mu, sigma))| {
            let count = m / k + usize::from(j < m % k);
            MvnSpec::new(mu, sigma, count)
        })
        .collect()
}

fn diag2(v: f64) -> Array2<f64> {
    array![[v, 0.0], [0.0, v]]
}

/// Builds a matrix from ragged upper-triangle rows.
fn upper8(rows: &[&[f64]]) -> Array2<f64> {
    let n = rows.len();
    let mut s = Array2::zeros((n, n));
    for (i, row) in rows.iter().enumerate() {
        for (off, v) in row.iter().enumerate() {
            s[[i, i + off]] = *v;
        }
    }
    s
}

/// Generates synthetic dataset `id`.
///
/// Clusters are drawn in order from `rng`, labelled by component index, then
/// shuffled with the same stream.
pub fn make_synthetic<R: Rng + ?Sized>(id: u32, rng: &mut R) -> Result<Dataset> {
    let specs = synthetic_specs(id)?;
    let n = specs[0].dim();
    let m: usize = specs.iter().map(|s| s.count).sum();
    let mut rows: Vec<(Vec<f64>, usize)> = Vec::with_capacity(m);
    for (j, spec) in specs.iter().enumerate() {
        let block = sample_mvn(spec, rng)?;
        rows.extend(block.rows().into_iter().map(|r| (r.to_vec(), j)));
    }
    rows.shuffle(rng);
    let points = Array2::from_shape_fn((m, n), |(i, c)| rows[i].0[c]);
    let truth = rows.iter().map(|r| r.1).collect();
    Dataset::new(format!("synthetic{id}"), points, Some(truth))
}

/// Sidecar metadata written next to a generated synthetic dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticMeta {
    pub id: u32,
    pub seed: u64,
    pub clusters: Vec<ClusterMeta>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterMeta {
    pub label: usize,
    pub count: usize,
    pub mu: Vec<f64>,
    pub sigma: Vec<Vec<f64>>,
}

impl SyntheticMeta {
    pub fn new(id: u32, seed: u64) -> Result<Self> {
        let clusters = synthetic_specs(id)?
            .iter()
            .enumerate()
            .map(|(label, s)| ClusterMeta {
                label,
                count: s.count,
                mu: s.mu.to_vec(),
                sigma: s.sigma().rows().into_iter().map(|r| r.to_vec()).collect(),
            })
            .collect();
        Ok(SyntheticMeta { id, seed, clusters })
    }
}

/// Generates dataset `id` from `seed` and writes `<dir>/synthetic<id>.csv`
/// (labels in the last column) plus `<dir>/synthetic<id>.meta.json`.
///
/// Returns the two paths.
pub fn write_synthetic(id: u32, seed: u64, dir: impl AsRef<Path>) -> Result<(PathBuf, PathBuf)> {
    let dir = dir.as_ref();
    let ds = make_synthetic(id, &mut rng::stream(seed))?;
    let meta = SyntheticMeta::new(id, seed)?;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let data_path = dir.join(format!("synthetic{id}.csv"));
    let meta_path = dir.join(format!("synthetic{id}.meta.json"));
    fs::write(&data_path, to_delimited(&ds, Delimiter::Comma))
        .map_err(|e| Error::io(&data_path, e))?;
    let json = serde_json::to_string_pretty(&meta).map_err(|e| Error::Format(e.to_string()))?;
    fs::write(&meta_path, json + "\n").map_err(|e| Error::io(&meta_path, e))?;
    Ok((data_path, meta_path))
}
