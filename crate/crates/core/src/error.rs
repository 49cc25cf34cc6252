//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Score pool has max == min, so the affine normalization is undefined.
    #[error("constant score pool: max equals min")]
    ConstantScorePool,

    /// A NaN or infinity showed up where a finite value is required.
    #[error("non-finite value: {0}")]
    NonFinite(String),

    /// Fewer items than the operation needs.
    #[error("need at least {needed} items, got {got}")]
    TooFewItems { needed: usize, got: usize },

    /// Duplicate id within a score set.
    #[error("duplicate id `{0}`")]
    DuplicateId(String),

    /// Standard deviation below zero.
    #[error("negative stddev for item `{0}`")]
    NegativeStddev(String),

    /// Exact ties under the strict tie policy; the message names the tied entries.
    #[error("tied values under strict tie policy: {0}")]
    TiedValues(String),

    /// Two sequences that must be aligned differ in length.
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    /// Paired sets disagree on item identity.
    #[error("misaligned ids at position {position}: expected `{expected}`, got `{got}`")]
    MisalignedIds {
        position: usize,
        expected: String,
        got: String,
    },

    /// All-zero correlate matrix in the generalized coefficient.
    #[error("degenerate correlates: {0}")]
    DegenerateCorrelates(&'static str),

    /// Rank vector fails a structural requirement.
    #[error("invalid rank vector: {0}")]
    InvalidRanks(String),

    /// Ground-truth ranks must be exactly 1..n for PWRC.
    #[error("non-canonical ground-truth ranks (expected 1..n in order)")]
    NonCanonicalRanks,

    /// Catch-all precondition violation with a description.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Zero-width sensory threshold interval; an AUC over it ranks everything equal.
    #[error("degenerate threshold range: t_min {t_min} >= t_max {t_max}")]
    DegenerateThresholdRange { t_min: f64, t_max: f64 },

    /// Malformed cell or structure in an input CSV, with coordinates.
    #[error("{file}: row {row}, column `{column}`: {message}")]
    CsvData {
        file: String,
        row: usize,
        column: String,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
