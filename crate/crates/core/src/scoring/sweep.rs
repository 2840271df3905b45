use serde::{Deserialize, Serialize};

use super::{
    band_counts, channel_adjust, scores, stratify, stratify_ground_truth, BandCounts, Clamp,
    CountingMode, Metrics, ScoreError, StratifiedMap, ThresholdFamily,
};
use crate::grid::{Grid, Planes};
use crate::scalar::Scalar;
use crate::synthgen::abs_transform;

/// Identifies the sample and method a record belongs to.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SampleKey {
    pub method: String,
    pub shard: usize,
    pub sample: usize,
    pub true_class: u8,
    pub predicted_class: u8,
}

/// Scores of one sample at one family member.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepPoint<T> {
    pub m: usize,
    pub counts: BandCounts,
    pub metrics: Metrics<T>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScoreRecord<T> {
    pub key: SampleKey,
    pub m: usize,
    pub metrics: Metrics<T>,
}

impl<T: Copy> ScoreRecord<T> {
    pub fn from_sweep(key: &SampleKey, points: &[SweepPoint<T>]) -> Vec<Self> {
        points
            .iter()
            .map(|p| ScoreRecord {
                key: key.clone(),
                m: p.m,
                metrics: p.metrics,
            })
            .collect()
    }
}

/// Stratifies an adjusted heatmap at every family member and scores it.
pub fn soft_sweep<T: Scalar>(
    adjusted: &Grid<T>,
    truth: &StratifiedMap,
    family: &ThresholdFamily,
    mode: CountingMode,
) -> Result<Vec<SweepPoint<T>>, ScoreError> {
    family
        .members::<T>()
        .iter()
        .enumerate()
        .map(|(m, t)| {
            let s = stratify(adjusted, t)?;
            let counts = band_counts(&s, truth, mode)?;
            Ok(SweepPoint {
                m,
                counts,
                metrics: scores(&counts),
            })
        })
        .collect()
}

/// Full per-sample evaluation: optional absolute value, channel adjustment
/// (optionally clamped), ground-truth stratification and the soft sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pipeline<T> {
    pub family: ThresholdFamily,
    pub clamp: Option<Clamp<T>>,
    pub abs: bool,
    pub mode: CountingMode,
}

impl<T: Scalar> Pipeline<T> {
    pub fn standard() -> Self {
        Self {
            family: ThresholdFamily::standard(),
            clamp: None,
            abs: false,
            mode: CountingMode::Disambiguated,
        }
    }

    /// Clamp to `[-0.1, 0.1]` with the matching 41-member family.
    pub fn clamped() -> Self {
        Self {
            family: ThresholdFamily::clamped(),
            clamp: Some(Clamp::default_bounds()),
            abs: false,
            mode: CountingMode::Disambiguated,
        }
    }

    pub fn with_abs(mut self, abs: bool) -> Self {
        self.abs = abs;
        self
    }

    pub fn adjust(&self, candidate: &Planes<T>) -> Result<Grid<T>, ScoreError> {
        if self.abs {
            channel_adjust(&abs_transform(candidate), self.clamp)
        } else {
            channel_adjust(candidate, self.clamp)
        }
    }

    pub fn evaluate(&self, candidate: &Planes<T>, ground_truth: &Grid<T>) -> Result<Vec<SweepPoint<T>>, ScoreError> {
        let found = (candidate.height(), candidate.width());
        if found != ground_truth.dims() {
            return Err(ScoreError::DimensionMismatch {
                expected: ground_truth.dims(),
                found,
            });
        }
        let adjusted = self.adjust(candidate)?;
        let truth = stratify_ground_truth(ground_truth)?;
        soft_sweep(&adjusted, &truth, &self.family, self.mode)
    }
}
