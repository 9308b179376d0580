//! Correlation, range-restriction corrections, bootstrap inference and the
//! correlation grid.

mod bootstrap;
mod correlation;
mod split;
mod table;

use thiserror::Error;

pub use bootstrap::{
    bca_ci, bca_endpoints, bca_pearson_multi, percentile_interval, quantile_sorted, BcaInterval,
    BootstrapConfig,
};
pub use correlation::{pearson, sample_sd, thorndike_case2, thorndike_case3};
pub use split::{percentile_split, percentile_threshold, PercentileSplit};
pub use table::{
    correlation_table, derive_seed, write_report_csv, AnalysisPlan, AnalysisRecord,
    CorrelationCell, Metric, Side, SplitVar, Suppression, REPORT_HEADER,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("vectors have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("need more samples, got {0}")]
    TooFewSamples(usize),
    #[error("zero variance: correlation undefined")]
    ZeroVariance,
    #[error("statistic undefined on every resample")]
    Undefined,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
