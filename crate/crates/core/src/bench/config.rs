//! Flat `key = value` experiment configuration.
//!
//! ```text
//! # comments and blank lines are ignored
//! dataset = synthetic:4        # or a path to a delimited file
//! dataset_seed = 7             # synthetic draws only
//! label_column = 4             # file datasets only
//! delimiter = comma            # comma | ws | tab | any single character
//! algorithms = kmeans-random, kmeans++, fuzzy-k, spss
//! k = 6                        # defaults to the number of truth classes
//! runs = 40
//! seed = 2024
//! output = out/synthetic4
//! emit = csv, markdown, svg
//! max_iterations = 300
//! tolerance = 1e-5
//! ```

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::clustering::ClusterParams;
use crate::dataset::Delimiter;
use crate::{Error, Result};

/// A clustering pipeline compared by the experiment runner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Algorithm {
    /// Uniform random seeds, Lloyd's k-means.
    #[serde(rename = "kmeans-random")]
    KmeansRandom,
    /// k-means++ seeds, Lloyd's k-means.
    #[serde(rename = "kmeans++")]
    KmeansPlusPlus,
    /// Uniform random seeds, fuzzy c-means.
    #[serde(rename = "fuzzy-k")]
    FuzzyK,
    /// SPSS seeds, Lloyd's k-means.
    #[serde(rename = "spss")]
    Spss,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::KmeansRandom,
        Algorithm::KmeansPlusPlus,
        Algorithm::FuzzyK,
        Algorithm::Spss,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::KmeansRandom => "kmeans-random",
            Algorithm::KmeansPlusPlus => "kmeans++",
            Algorithm::FuzzyK => "fuzzy-k",
            Algorithm::Spss => "spss",
        }
    }

    pub fn is_stochastic(self) -> bool {
        self != Algorithm::Spss
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidParams(format!("unknown algorithm {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DatasetSource {
    Synthetic {
        id: u32,
        seed: u64,
    },
    File {
        path: PathBuf,
        label_column: Option<usize>,
        delimiter: Delimiter,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Emit {
    pub csv: bool,
    pub markdown: bool,
    pub svg: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub dataset: DatasetSource,
    pub algorithms: Vec<Algorithm>,
    /// `None` means "use the number of truth classes".
    pub k: Option<usize>,
    pub runs: usize,
    pub base_seed: u64,
    pub output: PathBuf,
    pub emit: Emit,
    pub params: ClusterParams,
}

impl ExperimentConfig {
    /// All four algorithms, 40 runs, seed 0, CSV and markdown tables.
    pub fn new(dataset: DatasetSource) -> Self {
        ExperimentConfig {
            dataset,
            algorithms: Algorithm::ALL.to_vec(),
            k: None,
            runs: 40,
            base_seed: 0,
            output: PathBuf::from("out"),
            emit: Emit {
                csv: true,
                markdown: true,
                svg: false,
            },
            params: ClusterParams::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::InvalidParams("runs must be at least 1".into()));
        }
        if self.k == Some(0) {
            return Err(Error::InvalidParams("k must be at least 1".into()));
        }
        if self.algorithms.is_empty() {
            return Err(Error::InvalidParams("no algorithms selected".into()));
        }
        self.params.validate()
    }

    /// Reads a config file. Relative dataset and output paths are resolved
    /// against the file's directory.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::parse(&text)?;
        let base = path.parent().unwrap_or(Path::new(""));
        if let DatasetSource::File { path: p, .. } = &mut cfg.dataset {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        if cfg.output.is_relative() {
            cfg.output = base.join(&cfg.output);
        }
        Ok(cfg)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut dataset: Option<String> = None;
        let mut dataset_seed = 0u64;
        let mut label_column = None;
        let mut delimiter = Delimiter::Comma;
        let mut cfg = ExperimentConfig::new(DatasetSource::Synthetic { id: 1, seed: 0 });
        let mut dataset_line = 0;

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let err = |msg: String| Error::Config { line: line_no, msg };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, found {line:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            let num = |v: &str| {
                v.parse::<u64>()
                    .map_err(|_| err(format!("{key}: {v:?} is not a nonnegative integer")))
            };
            match key {
                "dataset" => {
                    dataset = Some(value.to_string());
                    dataset_line = line_no;
                }
                "dataset_seed" => dataset_seed = num(value)?,
                "label_column" => label_column = Some(num(value)? as usize),
                "delimiter" => delimiter = value.parse().map_err(|e: Error| err(e.to_string()))?,
                "algorithms" => {
                    cfg.algorithms = value
                        .split(',')
                        .map(|s| s.trim())
                        .filter(|s| !s.is_empty())
                        .map(|s| s.parse().map_err(|e: Error| err(e.to_string())))
                        .collect::<Result<Vec<_>>>()?;
                    cfg.algorithms.sort();
                    cfg.algorithms.dedup();
                }
                "k" => cfg.k = Some(num(value)? as usize),
                "runs" => cfg.runs = num(value)? as usize,
                "seed" => cfg.base_seed = num(value)?,
                "output" => cfg.output = PathBuf::from(value),
                "emit" => {
                    cfg.emit = Emit::default();
                    for flag in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                        match flag {
                            "csv" => cfg.emit.csv = true,
                            "markdown" | "md" => cfg.emit.markdown = true,
                            "svg" => cfg.emit.svg = true,
                            other => return Err(err(format!("unknown emit flag {other:?}"))),
                        }
                    }
                }
                "max_iterations" => cfg.params.max_iterations = num(value)? as usize,
                "tolerance" => {
                    cfg.params.tolerance = value
                        .parse()
                        .map_err(|_| err(format!("tolerance: {value:?} is not a number")))?
                }
                other => return Err(err(format!("unknown key {other:?}"))),
            }
        }

        let dataset = dataset.ok_or(Error::Config {
            line: 0,
            msg: "missing `dataset`".into(),
        })?;
        cfg.dataset = match dataset.strip_prefix("synthetic:") {
            Some(id) => DatasetSource::Synthetic {
                id: id.trim().parse().map_err(|_| Error::Config {
                    line: dataset_line,
                    msg: format!("bad synthetic id {id:?}"),
                })?,
                seed: dataset_seed,
            },
            None => DatasetSource::File {
                path: PathBuf::from(dataset),
                label_column,
                delimiter,
            },
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
