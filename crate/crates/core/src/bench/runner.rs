use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use super::aggregate::aggregate;
use super::config::{Algorithm, DatasetSource, ExperimentConfig};
use super::svg::emit_scatter_svg;
use super::table::{emit_table, TableFormat};
use crate::clustering::{fuzzy_cmeans, kmeans, Clustering};
use crate::dataset::{load_csv, make_synthetic, synthetic_specs, Dataset};
use crate::rng::{derive_seed, stream};
use crate::seeding::{seed_kmeanspp, seed_random, seed_spss, SeedSet};
use crate::validity::MetricBundle;
use crate::{par, Error, Result};

/// One algorithm run, as written to `reports.jsonl`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub dataset: String,
    pub algorithm: Algorithm,
    pub run: usize,
    /// Seed of the run's random stream; `None` for SPSS.
    pub rng_seed: Option<u64>,
    pub k: usize,
    pub seed_indices: Vec<usize>,
    pub iterations: usize,
    pub converged: bool,
    pub metrics: MetricBundle,
    /// Excluded from the JSON record so reports stay byte-reproducible.
    #[serde(skip)]
    pub wall_time_ms: f64,
}

impl RunReport {
    fn same_result(&self, other: &RunReport) -> bool {
        RunReport {
            run: other.run,
            wall_time_ms: other.wall_time_ms,
            ..self.clone()
        } == *other
    }
}

/// Loads the configured dataset, plus the generating means for synthetic
/// data.
pub fn load_dataset(cfg: &ExperimentConfig) -> Result<(Dataset, Option<Array2<f64>>)> {
    match &cfg.dataset {
        DatasetSource::Synthetic { id, seed } => {
            let ds = make_synthetic(*id, &mut stream(*seed))?;
            let specs = synthetic_specs(*id)?;
            let n = ds.dim();
            let means = Array2::from_shape_fn((specs.len(), n), |(j, d)| specs[j].mu[d]);
            Ok((ds, Some(means)))
        }
        DatasetSource::File {
            path,
            label_column,
            delimiter,
        } => Ok((load_csv(path, *label_column, *delimiter)?, None)),
    }
}

fn resolve_k(cfg: &ExperimentConfig, ds: &Dataset) -> Result<usize> {
    let k = cfg
        .k
        .or(ds.classes())
        .ok_or_else(|| Error::InvalidParams("k not given and dataset has no labels".into()))?;
    if k < 2 || k > ds.len() {
        return Err(Error::InvalidK { k, m: ds.len() });
    }
    Ok(k)
}

/// Executes run `run` of `algorithm`, returning the report and the final
/// clustering.
pub fn run_single(
    ds: &Dataset,
    algorithm: Algorithm,
    run: usize,
    k: usize,
    cfg: &ExperimentConfig,
) -> Result<(RunReport, Clustering)> {
    let start = Instant::now();
    let rng_seed = algorithm
        .is_stochastic()
        .then(|| derive_seed(cfg.base_seed, algorithm.name(), run as u64));
    let mut rng = stream(rng_seed.unwrap_or(0));
    let seeds: SeedSet = match algorithm {
        Algorithm::Spss => seed_spss(ds, k)?,
        Algorithm::KmeansPlusPlus => seed_kmeanspp(ds, k, &mut rng)?,
        Algorithm::KmeansRandom | Algorithm::FuzzyK => seed_random(ds, k, &mut rng)?,
    };
    let clustering = match algorithm {
        Algorithm::FuzzyK => fuzzy_cmeans(ds, &seeds, &cfg.params)?,
        _ => kmeans(ds, &seeds, &cfg.params)?,
    };
    let metrics = MetricBundle::evaluate(ds, &clustering)?;
    let report = RunReport {
        dataset: ds.name.clone(),
        algorithm,
        run,
        rng_seed,
        k,
        seed_indices: seeds.source_indices,
        iterations: clustering.iterations,
        converged: clustering.converged,
        metrics,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    Ok((report, clustering))
}

/// Runs every configured algorithm `cfg.runs` times on an already loaded
/// dataset. Reports come back sorted by (algorithm, run).
pub fn run_on(ds: &Dataset, cfg: &ExperimentConfig) -> Result<Vec<RunReport>> {
    cfg.validate()?;
    let k = resolve_k(cfg, ds)?;
    let jobs: Vec<(Algorithm, usize)> = cfg
        .algorithms
        .iter()
        .flat_map(|&a| (0..cfg.runs).map(move |r| (a, r)))
        .collect();
    let mut reports = par::map_slice(&jobs, |&(a, r)| run_single(ds, a, r, k, cfg).map(|x| x.0))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    reports.sort_by_key(|r| (r.algorithm, r.run));

    let spss: Vec<&RunReport> = reports
        .iter()
        .filter(|r| r.algorithm == Algorithm::Spss)
        .collect();
    if let Some(first) = spss.first() {
        if let Some(bad) = spss.iter().find(|r| !first.same_result(r)) {
            return Err(Error::Nondeterministic(format!(
                "spss run {} differs from run 0 on {}",
                bad.run, ds.name
            )));
        }
    }
    Ok(reports)
}

/// Loads the dataset and runs the experiment.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<RunReport>> {
    let (ds, _) = load_dataset(cfg)?;
    run_on(&ds, cfg)
}

/// One JSON object per line, in report order.
pub fn write_jsonl(reports: &[RunReport], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    for r in reports {
        out += &serde_json::to_string(r).map_err(|e| Error::Format(e.to_string()))?;
        out.push('\n');
    }
    write_file(path, out.as_bytes())
}

pub fn read_jsonl(path: impl AsRef<Path>) -> Result<Vec<RunReport>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(|e| Error::Format(e.to_string())))
        .collect()
}

pub(crate) fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    w.write_all(bytes)
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))
}

/// Everything [`execute`] wrote.
#[derive(Debug, Clone, Default)]
pub struct Outputs {
    pub reports: PathBuf,
    pub timings: PathBuf,
    pub tables: Vec<PathBuf>,
    pub figures: Vec<PathBuf>,
}

/// Runs the experiment and writes all configured artifacts under
/// `cfg.output`:
///
/// * `reports.jsonl`, one [`RunReport`] per line;
/// * `timings.csv` with per-run wall time (the only nondeterministic file);
/// * `table.csv` / `table.md` when enabled;
/// * `<dataset>_<algorithm>.svg` for run 0 of each algorithm when enabled and
///   the data is 2- or 3-dimensional.
pub fn execute(cfg: &ExperimentConfig) -> Result<(Vec<RunReport>, Outputs)> {
    let (ds, means) = load_dataset(cfg)?;
    let reports = run_on(&ds, cfg)?;
    let dir = &cfg.output;
    let mut out = Outputs {
        reports: dir.join("reports.jsonl"),
        timings: dir.join("timings.csv"),
        ..Outputs::default()
    };
    write_jsonl(&reports, &out.reports)?;

    let mut timings = String::from("algorithm,run,wall_ms\n");
    for r in &reports {
        timings += &format!("{},{},{:.3}\n", r.algorithm, r.run, r.wall_time_ms);
    }
    write_file(&out.timings, timings.as_bytes())?;

    let agg = aggregate(&reports)?;
    if cfg.emit.csv {
        let p = dir.join("table.csv");
        emit_table(&agg, TableFormat::Csv, &p)?;
        out.tables.push(p);
    }
    if cfg.emit.markdown {
        let p = dir.join("table.md");
        emit_table(&agg, TableFormat::Markdown, &p)?;
        out.tables.push(p);
    }
    if cfg.emit.svg {
        if matches!(ds.dim(), 2 | 3) {
            let k = resolve_k(cfg, &ds)?;
            for &a in &cfg.algorithms {
                let (_, clustering) = run_single(&ds, a, 0, k, cfg)?;
                let p = dir.join(format!("{}_{}.svg", ds.name, a.name()));
                emit_scatter_svg(&ds, &clustering, means.as_ref(), &p)?;
                out.figures.push(p);
            }
        } else {
            log::warn!(
                "skipping scatter plots: {} has {} dimensions",
                ds.name,
                ds.dim()
            );
        }
    }
    Ok((reports, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(id: u32, algorithms: &[Algorithm], runs: usize) -> ExperimentConfig {
        ExperimentConfig {
            algorithms: algorithms.to_vec(),
            runs,
            ..ExperimentConfig::new(DatasetSource::Synthetic { id, seed: 3 })
        }
    }

    #[test]
    fn single_spss_run() {
        let r = run_experiment(&cfg(3, &[Algorithm::Spss], 1)).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].rng_seed, None);
        assert_eq!(r[0].k, 3);
    }

    #[test]
    fn reports_are_sorted_and_seeded_per_algorithm() {
        let r = run_experiment(&cfg(1, &Algorithm::ALL, 3)).unwrap();
        assert_eq!(r.len(), 12);
        let order: Vec<(Algorithm, usize)> = r.iter().map(|x| (x.algorithm, x.run)).collect();
        let mut sorted = order.clone();
        sorted.sort();
        assert_eq!(order, sorted);
        let seeds: Vec<u64> = r.iter().filter_map(|x| x.rng_seed).collect();
        let mut uniq = seeds.clone();
        uniq.sort();
        uniq.dedup();
        assert_eq!(uniq.len(), 9);
    }

    #[test]
    fn adding_an_algorithm_keeps_other_streams() {
        let alone = run_experiment(&cfg(2, &[Algorithm::KmeansPlusPlus], 4)).unwrap();
        let all = run_experiment(&cfg(2, &Algorithm::ALL, 4)).unwrap();
        let pp: Vec<_> = all
            .into_iter()
            .filter(|r| r.algorithm == Algorithm::KmeansPlusPlus)
            .collect();
        let strip = |v: Vec<RunReport>| -> Vec<String> {
            v.iter()
                .map(|r| serde_json::to_string(r).unwrap())
                .collect()
        };
        assert_eq!(strip(alone), strip(pp));
    }

    #[test]
    fn k_larger_than_m_is_rejected() {
        let mut c = cfg(3, &[Algorithm::Spss], 1);
        c.k = Some(10_000);
        assert!(matches!(run_experiment(&c), Err(Error::InvalidK { .. })));
    }

    #[test]
    fn jsonl_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let r = run_experiment(&cfg(3, &[Algorithm::KmeansRandom, Algorithm::Spss], 2)).unwrap();
        let p = dir.path().join("nested/reports.jsonl");
        write_jsonl(&r, &p).unwrap();
        let back = read_jsonl(&p).unwrap();
        assert_eq!(back.len(), r.len());
        for (a, b) in r.iter().zip(&back) {
            assert_eq!(
                serde_json::to_string(a).unwrap(),
                serde_json::to_string(b).unwrap()
            );
        }
    }
}
