use super::{ScoreError, ThresholdVector};
use crate::cellgen::{GT_FEATURE, GT_LOCALIZATION};
use crate::grid::Grid;
use crate::scalar::Scalar;

/// Per-pixel bands in `{-2, -1, 0, 1, 2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratifiedMap(Grid<i8>);

impl StratifiedMap {
    /// Wraps a band grid, checking every value is a valid band.
    pub fn new(bands: Grid<i8>) -> Option<Self> {
        bands.iter().all(|b| (-2..=2).contains(b)).then_some(Self(bands))
    }

    pub fn bands(&self) -> &Grid<i8> {
        &self.0
    }

    pub fn dims(&self) -> (usize, usize) {
        self.0.dims()
    }

    pub fn as_slice(&self) -> &[i8] {
        self.0.as_slice()
    }
}

#[inline]
fn band<T: Scalar>(v: T, t1: T, t2: T) -> i8 {
    if v > t2 {
        2
    } else if v > t1 {
        1
    } else if v > -t1 {
        0
    } else if v > -t2 {
        -1
    } else {
        -2
    }
}

/// Five-band stratification of an adjusted heatmap.
///
/// `2` if `h > t2`, `1` on `(t1, t2]`, `0` on `(-t1, t1]`, `-1` on
/// `(-t2, -t1]`, `-2` if `h <= -t2`.
pub fn stratify<T: Scalar>(h: &Grid<T>, t: &ThresholdVector<T>) -> Result<StratifiedMap, ScoreError> {
    let (t1, t2) = (t.inner(), t.outer());
    let mut bands = Vec::with_capacity(h.len());
    for (index, &v) in h.iter().enumerate() {
        if !(v.abs() <= T::one()) {
            return Err(ScoreError::OutOfRange {
                index,
                value: v.to_f64_lossy(),
            });
        }
        bands.push(band(v, t1, t2));
    }
    Ok(StratifiedMap(
        Grid::from_vec(h.height(), h.width(), bands).expect("same size"),
    ))
}

/// Tolerance when matching stored ground-truth values; covers `f32` storage.
const GT_TOLERANCE: f64 = 1e-6;

/// Fixed ground-truth mapping `±0.9 → ±2`, `±0.4 → ±1`, `0 → 0`.
pub fn stratify_ground_truth<T: Scalar>(h0: &Grid<T>) -> Result<StratifiedMap, ScoreError> {
    let mut bands = Vec::with_capacity(h0.len());
    for (index, &v) in h0.iter().enumerate() {
        let x = v.to_f64_lossy();
        let mag = x.abs();
        let b = if mag <= GT_TOLERANCE {
            0
        } else if (mag - GT_LOCALIZATION).abs() <= GT_TOLERANCE {
            1
        } else if (mag - GT_FEATURE).abs() <= GT_TOLERANCE {
            2
        } else {
            return Err(ScoreError::UnexpectedGroundTruth { index, value: x });
        };
        bands.push(if x < 0.0 { -b } else { b });
    }
    Ok(StratifiedMap(
        Grid::from_vec(h0.height(), h0.width(), bands).expect("same size"),
    ))
}
