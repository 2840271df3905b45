use super::ScoreError;
use crate::grid::{Grid, Planes};
use crate::scalar::Scalar;

/// Saturation bounds `[lo, hi]` with `lo < 0 < hi`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Clamp<T> {
    lo: T,
    hi: T,
}

impl<T: Scalar> Clamp<T> {
    pub fn new(lo: T, hi: T) -> Result<Self, ScoreError> {
        if lo < T::zero() && T::zero() < hi {
            Ok(Self { lo, hi })
        } else {
            Err(ScoreError::InvalidClamp {
                lo: lo.to_f64_lossy(),
                hi: hi.to_f64_lossy(),
            })
        }
    }

    /// The `[-0.1, 0.1]` bounds paired with the clamped threshold family.
    pub fn default_bounds() -> Self {
        Self {
            lo: T::lit(-0.1),
            hi: T::lit(0.1),
        }
    }

    pub fn lo(&self) -> T {
        self.lo
    }

    pub fn hi(&self) -> T {
        self.hi
    }

    #[inline]
    pub fn apply(&self, v: T) -> T {
        if v >= self.hi {
            self.hi
        } else if v <= self.lo {
            self.lo
        } else {
            v
        }
    }
}

fn max_abs<T: Scalar>(values: &[T]) -> T {
    values.iter().fold(T::zero(), |m, &v| m.max(v.abs()))
}

/// Channel adjustment: `h → h/max|h| → [clamp] → Σ_c → h/max|h|`.
///
/// Single-channel input skips the summation. An all-zero map (at either
/// normalization) yields the all-zero map.
pub fn channel_adjust<T: Scalar>(h: &Planes<T>, clamp: Option<Clamp<T>>) -> Result<Grid<T>, ScoreError> {
    let c = h.channels();
    if c != 1 && c != 3 {
        return Err(ScoreError::BadChannels(c));
    }
    if let Some(idx) = h.as_slice().iter().position(|v| !v.is_finite()) {
        return Err(ScoreError::NonFinite(idx));
    }
    let (rows, cols) = (h.height(), h.width());
    let n = rows * cols;
    let zero = || Grid::filled(rows, cols, T::zero());

    let m = max_abs(h.as_slice());
    if m == T::zero() {
        return Ok(zero());
    }
    let normalized = |v: T| {
        let v = v / m;
        clamp.map_or(v, |cl| cl.apply(v))
    };
    let data = h.as_slice();
    let mut summed: Vec<T> = data[..n].iter().map(|&v| normalized(v)).collect();
    for ch in 1..c {
        for (acc, &v) in summed.iter_mut().zip(&data[ch * n..(ch + 1) * n]) {
            *acc = *acc + normalized(v);
        }
    }
    let m2 = max_abs(&summed);
    if m2 == T::zero() {
        return Ok(zero());
    }
    for v in summed.iter_mut() {
        *v = *v / m2;
    }
    Ok(Grid::from_vec(rows, cols, summed).expect("plane size"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn planes(c: usize, h: usize, w: usize, v: Vec<f64>) -> Planes<f64> {
        Planes::from_vec(c, h, w, v).unwrap()
    }

    #[test]
    fn three_channel_pixel_by_hand() {
        // [0.2, 0.4, -0.2] / 0.4 = [0.5, 1, -0.5]; sum 1.0; renormalized 1.0
        let out = channel_adjust(&planes(3, 1, 1, vec![0.2, 0.4, -0.2]), None).unwrap();
        assert_eq!(out.as_slice(), &[1.0]);
    }

    #[test]
    fn all_zero_maps_to_all_zero() {
        let out = channel_adjust(&planes(3, 2, 2, vec![0.0; 12]), None).unwrap();
        assert!(out.iter().all(|&v| v == 0.0));
        // channels that cancel exactly after summation
        let out = channel_adjust(&planes(3, 1, 1, vec![0.5, -0.5, 0.0]), None).unwrap();
        assert_eq!(out.as_slice(), &[0.0]);
    }

    #[test]
    fn clamp_saturates_after_first_normalization() {
        let cl = Clamp::new(-0.1, 0.1).unwrap();
        assert_eq!([0.5, -0.2, 0.05].map(|v| cl.apply(v)), [0.1, -0.1, 0.05]);
        // max|h| = 1 so normalization is the identity; clamped values renormalize by 0.1
        let out = channel_adjust(&planes(1, 1, 4, vec![1.0, 0.5, -0.2, 0.05]), Some(cl)).unwrap();
        assert_eq!(out.as_slice(), &[1.0, 1.0, -1.0, 0.5]);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            channel_adjust(&planes(1, 1, 2, vec![0.1, f64::NAN]), None),
            Err(ScoreError::NonFinite(1))
        );
        assert_eq!(
            channel_adjust(&planes(2, 1, 1, vec![0.1, 0.2]), None),
            Err(ScoreError::BadChannels(2))
        );
        assert!(Clamp::new(0.1, 0.2).is_err());
        assert!(Clamp::new(-0.1, 0.0).is_err());
    }

    #[test]
    fn single_channel_is_normalized_twice() {
        let out = channel_adjust(&planes(1, 1, 3, vec![0.9, 0.4, 0.0]), None).unwrap();
        assert_eq!(out.as_slice(), &[1.0, 0.4 / 0.9, 0.0]);
    }

    fn heatmap() -> impl Strategy<Value = (usize, Vec<f64>)> {
        prop_oneof![Just(1usize), Just(3usize)]
            .prop_flat_map(|c| (Just(c), prop::collection::vec(-5.0f64..5.0, c * 12)))
    }

    proptest! {
        #[test]
        fn output_has_unit_max_abs((c, v) in heatmap()) {
            let out = channel_adjust(&planes(c, 3, 4, v), None).unwrap();
            let m = out.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            prop_assert!(m == 0.0 || m == 1.0);
            prop_assert!(out.iter().all(|v| (-1.0..=1.0).contains(v)));
        }

        #[test]
        fn antisymmetric_under_negation((c, v) in heatmap(), clamped in any::<bool>()) {
            let cl = clamped.then(|| Clamp::new(-0.1, 0.1).unwrap());
            let neg: Vec<f64> = v.iter().map(|x| -x).collect();
            let a = channel_adjust(&planes(c, 3, 4, v), cl).unwrap();
            let b = channel_adjust(&planes(c, 3, 4, neg), cl).unwrap();
            for (x, y) in a.iter().zip(b.iter()) {
                prop_assert_eq!(*x, -*y);
            }
        }
    }
}
