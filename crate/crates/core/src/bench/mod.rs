//! The multi-run experiment protocol.
//!
//! Each stochastic algorithm is run `runs` times with seeds derived from
//! `(base seed, algorithm name, run index)`; SPSS is run just as often and
//! every repetition must agree exactly. Reports are aggregated into
//! mean/min/max tables and, for 2-D and 3-D data, centroid scatter plots.

mod aggregate;
mod config;
mod runner;
mod svg;
mod table;

pub use aggregate::{aggregate, Aggregate, AlgorithmSummary};
pub use config::{Algorithm, DatasetSource, Emit, ExperimentConfig};
pub use runner::{
    execute, load_dataset, read_jsonl, run_experiment, run_on, run_single, write_jsonl, Outputs,
    RunReport,
};
pub use svg::{emit_scatter_svg, render_scatter_svg};
pub use table::{emit_table, parse_table_csv, render_table, TableFormat};

/// Whether this build runs its data-parallel loops on rayon.
pub const fn is_parallel() -> bool {
    crate::par::is_parallel()
}
