use serde::{Deserialize, Serialize};

use super::ScoreError;
use crate::scalar::Scalar;

/// Threshold components are integers over this denominator.
pub const THRESHOLD_DENOMINATOR: i64 = 1000;

/// Symmetric threshold `[-t2, -t1, t1, t2]` with `0 < t1 < t2 <= 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThresholdVector<T> {
    inner: T,
    outer: T,
}

impl<T: Scalar> ThresholdVector<T> {
    pub fn new(inner: T, outer: T) -> Result<Self, ScoreError> {
        if !(T::zero() < inner && inner < outer && outer <= T::one()) {
            return Err(ScoreError::InvalidThreshold(format!(
                "need 0 < t1 < t2 <= 1, got t1={inner}, t2={outer}"
            )));
        }
        Ok(Self { inner, outer })
    }

    /// `t1`: boundary between band 0 and band ±1.
    pub fn inner(&self) -> T {
        self.inner
    }

    /// `t2`: boundary between band ±1 and band ±2.
    pub fn outer(&self) -> T {
        self.outer
    }

    pub fn components(&self) -> [T; 4] {
        [-self.outer, -self.inner, self.inner, self.outer]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Standard,
    Clamped,
}

impl std::fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FamilyKind::Standard => "standard",
            FamilyKind::Clamped => "clamped",
        })
    }
}

impl std::str::FromStr for FamilyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "standard" => Ok(FamilyKind::Standard),
            "clamped" => Ok(FamilyKind::Clamped),
            _ => Err(format!("unknown threshold family '{s}' (expected standard or clamped)")),
        }
    }
}

/// Soft-threshold family `t_m = [-(t2 - m·d), -(t1 - m·d), t1 - m·d, t2 - m·d]`
/// for `m = 0..=n_soft`.
///
/// All quantities are stored as integers over [`THRESHOLD_DENOMINATOR`], so
/// each member component is a single correctly rounded division.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ThresholdFamily {
    kind: FamilyKind,
    inner: i64,
    outer: i64,
    step: i64,
    n_soft: usize,
}

impl ThresholdFamily {
    /// `t_m = [-0.5+md, -0.3+md, 0.3-md, 0.5-md]`, `d = 0.005`, `m = 0..=55`.
    pub fn standard() -> Self {
        Self {
            kind: FamilyKind::Standard,
            inner: 300,
            outer: 500,
            step: 5,
            n_soft: 55,
        }
    }

    /// `t_m = [-0.9+md, -0.5+md, 0.5-md, 0.9-md]`, `d = 0.01`, `m = 0..=40`.
    pub fn clamped() -> Self {
        Self {
            kind: FamilyKind::Clamped,
            inner: 500,
            outer: 900,
            step: 10,
            n_soft: 40,
        }
    }

    pub fn of_kind(kind: FamilyKind) -> Self {
        match kind {
            FamilyKind::Standard => Self::standard(),
            FamilyKind::Clamped => Self::clamped(),
        }
    }

    /// Custom family in thousandths; every member must be a valid threshold.
    pub fn new(kind: FamilyKind, inner: i64, outer: i64, step: i64, n_soft: usize) -> Result<Self, ScoreError> {
        let fam = Self {
            kind,
            inner,
            outer,
            step,
            n_soft,
        };
        for m in 0..=n_soft {
            let (t1, t2) = fam.numerators(m);
            if !(0 < t1 && t1 < t2 && t2 <= THRESHOLD_DENOMINATOR) {
                return Err(ScoreError::InvalidThreshold(format!(
                    "member {m} = ({t1}, {t2})/{THRESHOLD_DENOMINATOR} violates 0 < t1 < t2 <= 1"
                )));
            }
        }
        Ok(fam)
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn n_soft(&self) -> usize {
        self.n_soft
    }

    /// Number of members, `n_soft + 1`.
    pub fn len(&self) -> usize {
        self.n_soft + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn numerators(&self, m: usize) -> (i64, i64) {
        let shift = self.step * m as i64;
        (self.inner - shift, self.outer - shift)
    }

    /// Member `t_m`. Panics if `m > n_soft`.
    pub fn member<T: Scalar>(&self, m: usize) -> ThresholdVector<T> {
        assert!(m <= self.n_soft, "member {m} out of range 0..={}", self.n_soft);
        let (t1, t2) = self.numerators(m);
        ThresholdVector {
            inner: T::ratio(t1, THRESHOLD_DENOMINATOR),
            outer: T::ratio(t2, THRESHOLD_DENOMINATOR),
        }
    }

    pub fn members<T: Scalar>(&self) -> Vec<ThresholdVector<T>> {
        (0..=self.n_soft).map(|m| self.member(m)).collect()
    }
}
