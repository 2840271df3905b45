use serde::{Deserialize, Serialize};

use super::{ScoreError, StratifiedMap};
use crate::scalar::Scalar;

/// Smoothing constant in the precision, recall and FPR denominators.
pub const EPSILON: f64 = 1e-6;

/// How pixels with a nonzero ground-truth band but a zero candidate band count.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountingMode {
    /// Every pixel falls in exactly one of TP/FP/FN/TN: a wrong nonzero band
    /// is a false positive, a zero band where the truth is nonzero a false negative.
    #[default]
    Disambiguated,
    /// Literal reading: a zero band where the truth is nonzero counts as both
    /// FN and FP. Breaks the partition; kept for comparison.
    StrictLiteral,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BandCounts {
    pub tp: u64,
    pub fp: u64,
    pub fn_: u64,
    pub tn: u64,
    pub total: u64,
}

/// Counts hits and misses of a stratified candidate against stratified truth.
pub fn band_counts(
    candidate: &StratifiedMap,
    truth: &StratifiedMap,
    mode: CountingMode,
) -> Result<BandCounts, ScoreError> {
    if candidate.dims() != truth.dims() {
        return Err(ScoreError::DimensionMismatch {
            expected: truth.dims(),
            found: candidate.dims(),
        });
    }
    // histogram over (truth band, candidate band)
    let mut hist = [[0u64; 5]; 5];
    for (&s, &s0) in candidate.as_slice().iter().zip(truth.as_slice()) {
        hist[(s0 + 2) as usize][(s + 2) as usize] += 1;
    }
    let mut c = BandCounts {
        total: candidate.as_slice().len() as u64,
        ..BandCounts::default()
    };
    for (t, row) in hist.iter().enumerate() {
        for (p, &n) in row.iter().enumerate() {
            let (truth_band, band) = (t as i8 - 2, p as i8 - 2);
            match (truth_band == 0, band == 0) {
                (true, true) => c.tn += n,
                (true, false) => c.fp += n,
                (false, true) => {
                    c.fn_ += n;
                    if mode == CountingMode::StrictLiteral {
                        c.fp += n;
                    }
                }
                (false, false) if band == truth_band => c.tp += n,
                (false, false) => c.fp += n,
            }
        }
    }
    Ok(c)
}

/// Accuracy, precision, recall and false positive rate of one comparison.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Metrics<T> {
    pub accuracy: T,
    pub precision: T,
    pub recall: T,
    pub fpr: T,
}

/// `A = (TP+TN)/total`, `P = TP/(TP+FP+ε)`, `R = TP/(TP+FN+ε)`,
/// `FPR = FP/(FP+TN+ε)`. An empty map has accuracy 0.
pub fn scores<T: Scalar>(c: &BandCounts) -> Metrics<T> {
    let n = |v: u64| T::from_u64(v).expect("count representable");
    let eps = T::lit(EPSILON);
    let accuracy = if c.total == 0 {
        T::zero()
    } else {
        n(c.tp + c.tn) / n(c.total)
    };
    Metrics {
        accuracy,
        precision: n(c.tp) / (n(c.tp) + n(c.fp) + eps),
        recall: n(c.tp) / (n(c.tp) + n(c.fn_) + eps),
        fpr: n(c.fp) / (n(c.fp) + n(c.tn) + eps),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;

    fn map(h: usize, w: usize, v: &[i8]) -> StratifiedMap {
        StratifiedMap::new(Grid::from_vec(h, w, v.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn two_by_two_example() {
        let truth = map(2, 2, &[2, 1, 0, 0]);
        let cand = map(2, 2, &[2, 0, 1, 0]);
        let c = band_counts(&cand, &truth, CountingMode::Disambiguated).unwrap();
        assert_eq!((c.tp, c.fp, c.fn_, c.tn, c.total), (1, 1, 1, 1, 4));
        let m: Metrics<f64> = scores(&c);
        let half = 1.0 / (2.0 + 1e-6);
        assert_eq!(m.precision, half);
        assert_eq!(m.recall, half);
        assert_eq!(m.fpr, half);
        assert_eq!(m.accuracy, 0.5);
    }

    #[test]
    fn identity_and_all_zero_candidates() {
        let truth = map(2, 3, &[2, 1, 0, -1, 0, 0]);
        let c = band_counts(&truth, &truth, CountingMode::Disambiguated).unwrap();
        assert_eq!((c.tp, c.fp, c.fn_, c.tn), (3, 0, 0, 3));
        let zero = map(2, 3, &[0; 6]);
        let c = band_counts(&zero, &truth, CountingMode::Disambiguated).unwrap();
        assert_eq!((c.tp, c.fp, c.fn_, c.tn), (0, 0, 3, 3));
        let m: Metrics<f64> = scores(&c);
        assert_eq!((m.precision, m.recall), (0.0, 0.0));
    }

    #[test]
    fn strict_literal_double_counts_missed_pixels() {
        let truth = map(1, 3, &[2, 1, 0]);
        let cand = map(1, 3, &[0, 2, 0]);
        let d = band_counts(&cand, &truth, CountingMode::Disambiguated).unwrap();
        let s = band_counts(&cand, &truth, CountingMode::StrictLiteral).unwrap();
        assert_eq!((d.tp, d.fp, d.fn_, d.tn), (0, 1, 1, 1));
        assert_eq!((s.tp, s.fp, s.fn_, s.tn), (0, 2, 1, 1));
    }

    #[test]
    fn perfect_precision_is_nearly_one() {
        let c = BandCounts {
            tp: 1000,
            total: 1000,
            ..Default::default()
        };
        let m: Metrics<f64> = scores(&c);
        assert_eq!(m.precision, 1000.0 / (1000.0 + 1e-6));
        assert!(m.precision > 0.999_999);
        assert_eq!(m.accuracy, 1.0);
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(
            band_counts(&map(1, 2, &[0, 0]), &map(2, 1, &[0, 0]), CountingMode::Disambiguated),
            Err(ScoreError::DimensionMismatch { .. })
        ));
    }
}
