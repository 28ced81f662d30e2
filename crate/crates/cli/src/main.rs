use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use spss_core::bench::{aggregate, execute, render_table, ExperimentConfig, TableFormat};
use spss_core::dataset::{load_csv, make_synthetic, write_synthetic, Dataset, Delimiter};
use spss_core::enrichment::{go_pvalue, GoQuery};
use spss_core::rng::stream;
use spss_core::seeding::{seed_with, Method};
use spss_core::validity::{
    adjusted_rand, error_rate, hubert_index, pair_counts, rand_index, MetricBundle,
};
use spss_core::Clustering;

/// Deterministic cluster seeding and clustering benchmarks.
#[derive(Parser)]
#[command(name = "spss", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a config file.
    Run {
        config: PathBuf,
        /// Override the config's output directory.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Override the number of runs per algorithm.
        #[arg(long)]
        runs: Option<usize>,
    },
    /// Print the initial centroids chosen by a seeding method.
    Seed {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, default_value = "spss")]
        method: Method,
        #[arg(short, long)]
        k: usize,
        /// Stream seed for the stochastic methods.
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
    },
    /// Score a label file against ground truth.
    Metrics {
        /// Predicted labels: integers separated by whitespace or commas.
        #[arg(long)]
        labels: PathBuf,
        /// Truth labels in the same format. Defaults to the data file's label column.
        #[arg(long)]
        truth: Option<PathBuf>,
        /// Points, enabling the internal indices (SIL, DB, CS).
        #[command(flatten)]
        data: OptionalDataArgs,
    },
    /// Hypergeometric P-values for rows of `n,k,g,f`.
    Enrich {
        input: PathBuf,
        #[arg(long, default_value = "comma")]
        delimiter: Delimiter,
    },
    /// Write a synthetic dataset and its metadata sidecar.
    Synth {
        #[arg(long)]
        id: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct DataArgs {
    /// `synthetic:<id>` or a delimited file.
    #[arg(long)]
    dataset: String,
    #[arg(long, default_value_t = 0)]
    dataset_seed: u64,
    #[arg(long)]
    label_column: Option<usize>,
    #[arg(long, default_value = "comma")]
    delimiter: Delimiter,
}

#[derive(Args)]
struct OptionalDataArgs {
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long)]
    label_column: Option<usize>,
    #[arg(long, default_value = "comma")]
    delimiter: Delimiter,
}

impl DataArgs {
    fn load(&self) -> Result<Dataset> {
        Ok(match self.dataset.strip_prefix("synthetic:") {
            Some(id) => {
                let id = id
                    .parse()
                    .with_context(|| format!("bad synthetic id {id:?}"))?;
                make_synthetic(id, &mut stream(self.dataset_seed))?
            }
            None => load_csv(&self.dataset, self.label_column, self.delimiter)?,
        })
    }
}

fn read_labels(path: &Path) -> Result<Vec<usize>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let raw: Vec<i64> = text
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .with_context(|| format!("{}: bad label {s:?}", path.display()))
        })
        .collect::<Result<_>>()?;
    Ok(compact(&raw))
}

/// Renumbers arbitrary integer labels to `0..c` by first appearance.
fn compact(raw: &[i64]) -> Vec<usize> {
    let mut seen: Vec<i64> = Vec::new();
    raw.iter()
        .map(|l| match seen.iter().position(|s| s == l) {
            Some(i) => i,
            None => {
                seen.push(*l);
                seen.len() - 1
            }
        })
        .collect()
}

fn cmd_run(config: &Path, output: Option<PathBuf>, runs: Option<usize>) -> Result<()> {
    let mut cfg = ExperimentConfig::from_file(config)?;
    if let Some(o) = output {
        cfg.output = o;
    }
    if let Some(r) = runs {
        cfg.runs = r;
    }
    let (reports, out) = execute(&cfg)?;
    print!(
        "{}",
        render_table(&aggregate(&reports)?, TableFormat::Markdown)
    );
    eprintln!("wrote {}", out.reports.display());
    for p in out.tables.iter().chain(&out.figures) {
        eprintln!("wrote {}", p.display());
    }
    Ok(())
}

fn cmd_seed(data: &DataArgs, method: Method, k: usize, rng_seed: u64) -> Result<()> {
    let ds = data.load()?;
    let mut seeds = seed_with(method, &ds, k, &mut stream(rng_seed))?;
    if method.is_stochastic() {
        seeds = seeds.with_rng_seed(rng_seed);
    }
    print!("{}", seeds.to_record());
    Ok(())
}

fn cmd_metrics(labels: &Path, truth: Option<&Path>, data: &OptionalDataArgs) -> Result<()> {
    let labels = read_labels(labels)?;
    let ds = data
        .data
        .as_ref()
        .map(|p| load_csv(p, data.label_column, data.delimiter))
        .transpose()?;
    let truth = match (truth, &ds) {
        (Some(t), _) => read_labels(t)?,
        (None, Some(ds)) => match ds.truth() {
            Some(t) => t.to_vec(),
            None => bail!("no --truth given and the data file has no --label-column"),
        },
        (None, None) => bail!("either --truth or --data with --label-column is required"),
    };
    match ds {
        Some(ds) => {
            let ds = Dataset::new(ds.name.clone(), ds.points().clone(), Some(truth))?;
            let b = MetricBundle::evaluate(&ds, &Clustering::from_labels(&ds, labels)?)?;
            println!("{}", MetricBundle::HEADER.join(","));
            println!("{}", b.to_csv_row());
        }
        None => {
            let pc = pair_counts(&labels, &truth)?;
            println!("ARI,RI,HI,err");
            println!(
                "{:?},{:?},{:?},{:?}",
                adjusted_rand(&pc),
                rand_index(&pc),
                hubert_index(&pc),
                error_rate(&labels, &truth)?
            );
        }
    }
    Ok(())
}

fn cmd_enrich(input: &Path, delimiter: Delimiter) -> Result<()> {
    let text = fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
    println!("n,k,g,f,p");
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = match delimiter {
            Delimiter::Comma => line.split(',').collect(),
            Delimiter::Whitespace => line.split_whitespace().collect(),
            Delimiter::Char(c) => line.split(c).collect(),
        };
        let nums: Vec<u64> = match fields.iter().map(|s| s.trim().parse()).collect() {
            Ok(v) => v,
            // a header line is allowed at the top
            Err(_) if idx == 0 => continue,
            Err(_) => bail!(
                "{}:{}: expected four nonnegative integers",
                input.display(),
                idx + 1
            ),
        };
        let [n, k, g, f] = nums[..] else {
            bail!(
                "{}:{}: expected 4 fields, found {}",
                input.display(),
                idx + 1,
                nums.len()
            );
        };
        let q =
            GoQuery::new(n, k, g, f).with_context(|| format!("{}:{}", input.display(), idx + 1))?;
        println!("{n},{k},{g},{f},{:?}", go_pvalue(&q)?);
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run {
            config,
            output,
            runs,
        } => cmd_run(config, output.clone(), *runs),
        Command::Seed {
            data,
            method,
            k,
            rng_seed,
        } => cmd_seed(data, *method, *k, *rng_seed),
        Command::Metrics {
            labels,
            truth,
            data,
        } => cmd_metrics(labels, truth.as_deref(), data),
        Command::Enrich { input, delimiter } => cmd_enrich(input, *delimiter),
        Command::Synth { id, seed, out } => write_synthetic(*id, *seed, out)
            .map(|(csv, meta)| {
                println!("{}", csv.display());
                println!("{}", meta.display());
            })
            .map_err(Into::into),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
