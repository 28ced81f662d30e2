//! Deterministic cluster seeding and a reproducible k-means benchmark harness.
//!
//! The crate provides:
//!
//! * [`dataset`]: delimited-file ingestion, Gaussian-mixture synthesis and
//!   pairwise distance geometry.
//! * [`seeding`]: the single-pass density seeding (SPSS) alongside
//!   k-means++, KKZ and uniform random selection.
//! * [`clustering`]: Lloyd's k-means and fuzzy c-means driven from a
//!   [`seeding::SeedSet`].
//! * [`validity`]: error rate, Rand, adjusted Rand, Hubert, silhouette,
//!   Davies–Bouldin and CS indices.
//! * [`enrichment`]: the hypergeometric upper-tail P-value used to score gene
//!   clusters against an annotation.
//! * [`bench`]: the multi-run experiment protocol, aggregation, table and
//!   SVG emission.
//!
//! With the default `parallel` feature the inner data-parallel loops run on
//! rayon; every parallel loop produces results identical to its sequential
//! counterpart.

pub mod bench;
pub mod clustering;
pub mod dataset;
pub mod enrichment;
mod error;
pub(crate) mod par;
pub mod rng;
pub mod seeding;
pub mod validity;

pub use error::{Error, Result};

pub use clustering::{assign, fuzzy_cmeans, kmeans, ClusterParams, Clustering};
pub use dataset::{
    distance_matrix, load_csv, make_synthetic, sample_mvn, Dataset, Delimiter, DistanceMatrix,
    MvnSpec,
};
pub use enrichment::{go_pvalue, GoQuery};
pub use seeding::{seed_kkz, seed_kmeanspp, seed_random, seed_spss, sumv, Method, SeedSet};
pub use validity::MetricBundle;
