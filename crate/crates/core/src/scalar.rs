//! Scalar abstraction shared by the geometry and scoring code.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating point scalar: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Converts an `f64` literal into this scalar type (rounded to nearest).
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable")
    }

    /// Exact-rational constructor: `num / den` rounded once.
    ///
    /// Both operands are small integers and therefore exact, so the result is
    /// the correctly rounded value of the rational number. This makes
    /// `ratio(-225, 1000)` bit-identical to the literal `-0.225`.
    fn ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num).expect("numerator representable")
            / Self::from_i64(den).expect("denominator representable")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Pairwise (cascade) summation in a fixed order.
///
/// The reduction tree depends only on the slice length, so the result does
/// not depend on how the values were produced (serially or in parallel).
pub fn pairwise_sum<T: Scalar>(values: &[T]) -> T {
    const LEAF: usize = 8;
    if values.len() <= LEAF {
        return values.iter().fold(T::zero(), |acc, &v| acc + v);
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Arithmetic mean with pairwise summation. `None` for an empty slice.
pub fn mean<T: Scalar>(values: &[T]) -> Option<T> {
    if values.is_empty() {
        return None;
    }
    Some(pairwise_sum(values) / T::from_usize(values.len())?)
}

/// Population standard deviation (divisor N). `None` for an empty slice.
pub fn std_dev<T: Scalar>(values: &[T]) -> Option<T> {
    let mu = mean(values)?;
    let sq: Vec<T> = values.iter().map(|&v| (v - mu) * (v - mu)).collect();
    Some(mean(&sq)?.sqrt())
}
