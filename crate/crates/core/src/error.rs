//! Error type shared by every module of the crate.

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid mask shape {shape:?}: rank must be 2 or 3 and every extent at least 1")]
    ShapeInvalid { shape: Vec<usize> },

    #[error("label data has length {actual}, shape requires {expected}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("label {label} is outside the supported range 0..=65535")]
    LabelInvalid { label: i128 },

    #[error("shape mismatch: truth {truth:?} vs prediction {pred:?}")]
    ShapeMismatch { truth: Vec<usize>, pred: Vec<usize> },

    #[error("label {label} is not part of the class list")]
    UnknownLabel { label: u16 },

    #[error("metric `{metric}` is undefined: denominator `{denominator}` is zero")]
    MetricUndefined { metric: String, denominator: String },

    #[error("point set `{side}` is empty")]
    EmptyPointSet { side: String },

    #[error("point sets use different spacing: {a:?} vs {b:?}")]
    SpacingMismatch { a: Vec<f64>, b: Vec<f64> },

    #[error("invalid spacing {spacing:?} for a rank-{rank} grid")]
    SpacingInvalid { spacing: Vec<f64>, rank: usize },

    #[error("metric name `{0}` is already registered")]
    DuplicateName(String),

    #[error("unknown metric `{0}`")]
    UnknownMetric(String),

    #[error("no defined per-class scores to aggregate")]
    NoDefinedScores,

    #[error("file not found: {}", .0.display())]
    FileNotFound(PathBuf),

    #[error("unsupported mask format: {0}")]
    FormatUnsupported(String),

    #[error("corrupt header: {0}")]
    HeaderCorrupt(String),

    #[error("payload size mismatch: expected {expected} bytes, found {actual}")]
    SizeMismatch { expected: usize, actual: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
