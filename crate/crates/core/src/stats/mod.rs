//! Numeric kernel for the derived quantities shown in micromap columns.
//!
//! Everything here is a pure function over borrowed slices.

mod change;
mod interval;
mod lowess;
mod lq;
mod pca;

pub use change::over_year_pct_change;
pub use interval::{ci_from_prse, normal_two_sided_quantile, Percentiles, WageStatRow};
pub use lowess::{lowess_fit, lowess_residuals, tricube, LowessParams};
pub use lq::{location_quotient, LqInput};
pub use pca::pca_scores;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("undefined LQ (national concentration zero)")]
    UndefinedLq,
    #[error("invalid LQ input: {0}")]
    InvalidLqInput(&'static str),
    #[error("lag must be at least 1 and shorter than the series (lag {lag}, length {len})")]
    InvalidLag { lag: usize, len: usize },
    #[error("negative prse {0}")]
    NegativePrse(f64),
    #[error("confidence level {0} outside (0, 1)")]
    InvalidLevel(f64),
    #[error("lowess needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("degenerate abscissa")]
    DegenerateAbscissa,
    #[error("non-finite input at index {0}")]
    NonFinite(usize),
    #[error("span {span} gives a neighborhood of {size} points for n = {n}; need at least 2")]
    InvalidSpan { span: f64, size: usize, n: usize },
    #[error("PCA needs at least 2 rows, got {0}")]
    TooFewRows(usize),
    #[error("component {k} requested from {columns} columns")]
    InvalidComponent { k: usize, columns: usize },
    #[error("zero-variance column {0}")]
    ZeroVariance(String),
    #[error("ragged matrix: row {0} has the wrong width")]
    RaggedMatrix(usize),
    #[error("percentiles out of order: {0}")]
    UnorderedPercentiles(String),
}
