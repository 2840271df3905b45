//! Five-band scoring of candidate heatmaps against ground truth.
//!
//! Pipeline per sample: channel adjustment (normalize, optional clamp, sum
//! over channels, renormalize), stratification into bands `{-2..=2}` for every
//! member of a threshold family, band counting against the stratified ground
//! truth, and accuracy/precision/recall/FPR with `ε = 1e-6` smoothing.
//! Records are then aggregated per sample (average and best over the family),
//! per method (mean ± std over samples) and into ROC points (mean FPR and mean
//! recall per family member).

mod adjust;
mod aggregate;
mod counts;
mod stratify;
mod sweep;
mod thresholds;

use thiserror::Error;

pub use adjust::{channel_adjust, Clamp};
pub use aggregate::{
    aggregate, roc_curves, roc_points, Aggregation, MethodSummary, MetricSummary, MetricTriple,
    RocCurve, RocPoint, SampleAggregate,
};
pub use counts::{band_counts, scores, BandCounts, CountingMode, Metrics, EPSILON};
pub use stratify::{stratify, stratify_ground_truth, StratifiedMap};
pub use sweep::{soft_sweep, Pipeline, SampleKey, ScoreRecord, SweepPoint};
pub use thresholds::{FamilyKind, ThresholdFamily, ThresholdVector, THRESHOLD_DENOMINATOR};

#[derive(Debug, Error, PartialEq)]
pub enum ScoreError {
    #[error("heatmap contains a non-finite value at index {0}")]
    NonFinite(usize),
    #[error("heatmap must have 1 or 3 channels, got {0}")]
    BadChannels(usize),
    #[error("invalid threshold: {0}")]
    InvalidThreshold(String),
    #[error("invalid clamp bounds [{lo}, {hi}]: need lo < 0 < hi")]
    InvalidClamp { lo: f64, hi: f64 },
    #[error("heatmap value {value} at index {index} is outside [-1, 1]")]
    OutOfRange { index: usize, value: f64 },
    #[error("ground-truth value {value} at index {index} is not one of 0, ±0.4, ±0.9")]
    UnexpectedGroundTruth { index: usize, value: f64 },
    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("no records to aggregate")]
    Empty,
    #[error("incomplete record set: {0}")]
    Incomplete(String),
}
