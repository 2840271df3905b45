//! Ground-truth heatmap construction.

use serde::{Deserialize, Serialize};

use super::{CellBody, CellClass};
use crate::grid::{Grid, Mask};
use crate::scalar::Scalar;

/// Heatmap value of discriminative-feature pixels.
pub const GT_FEATURE: f64 = 0.9;
/// Heatmap value of localization pixels.
pub const GT_LOCALIZATION: f64 = 0.4;

/// What a cell part contributes to the ground truth.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Role {
    Discriminative,
    Localization,
    Ignore,
}

/// Role of each cell part in the ground truth of one class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub border: Role,
    pub inner: Role,
    pub skeleton: Role,
    pub tails: Role,
}

impl Assignment {
    pub fn default_for(class: CellClass) -> Self {
        use Role::*;
        match class.id() {
            0 | 3..=5 => Self {
                border: Discriminative,
                inner: Localization,
                skeleton: Ignore,
                tails: Ignore,
            },
            1 | 2 => Self {
                border: Localization,
                inner: Localization,
                skeleton: Discriminative,
                tails: Ignore,
            },
            6..=8 => Self {
                border: Localization,
                inner: Localization,
                skeleton: Ignore,
                tails: Discriminative,
            },
            _ => Self {
                border: Ignore,
                inner: Ignore,
                skeleton: Ignore,
                tails: Ignore,
            },
        }
    }
}

fn channel_norm<T: Scalar>(px: &[T; 3]) -> T {
    (px[0] * px[0] + px[1] * px[1] + px[2] * px[2]).sqrt() / T::lit(3.0)
}

/// Binarizes the two colored layers and combines them into a heatmap.
///
/// `feature_ex = ⅓·‖feature‖ >= th_d`, `body_ex = ⅓·‖body‖ >= th_l`, then
/// `body_ex` loses every feature pixel and the result is
/// `0.9·feature_ex + 0.4·body_ex`.
pub fn make_explanation<T: Scalar>(
    feature: &Grid<[T; 3]>,
    body: &Grid<[T; 3]>,
    th_feature: T,
    th_body: T,
) -> Grid<T> {
    let hi = T::lit(GT_FEATURE);
    let lo = T::lit(GT_LOCALIZATION);
    feature.zip_map(body, |f, b| {
        let feature_ex = channel_norm(f) >= th_feature;
        let body_ex = channel_norm(b) >= th_body && !feature_ex;
        if feature_ex {
            hi
        } else if body_ex {
            lo
        } else {
            T::zero()
        }
    })
}

/// Splits a rendered body into discriminative and localization layers per
/// `assignment` and builds its ground truth.
pub fn explain_body<T: Scalar>(
    body: &CellBody<T>,
    assignment: &Assignment,
    th_feature: T,
    th_body: T,
) -> Grid<T> {
    let (h, w) = body.ball.dims();
    let empty = Mask::filled(h, w, false);
    let parts = [
        (Some(&body.border), assignment.border),
        (Some(&body.inner), assignment.inner),
        (body.skeleton.as_ref(), assignment.skeleton),
        (body.tails.as_ref(), assignment.tails),
    ];
    let mut feature_mask = empty.clone();
    let mut body_mask = empty;
    for (mask, role) in parts {
        let Some(mask) = mask else { continue };
        match role {
            Role::Discriminative => feature_mask = feature_mask.or(mask),
            Role::Localization => body_mask = body_mask.or(mask),
            Role::Ignore => {}
        }
    }
    let layer = |m: &Mask| body.ball.zip_map(m, |&px, &on| if on { px } else { [T::zero(); 3] });
    make_explanation(&layer(&feature_mask), &layer(&body_mask), th_feature, th_body)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn feature_wins_over_body_and_thresholds_apply() {
        let c = [0.6f64, 0.0, 0.0]; // ⅓‖c‖ = 0.2
        let dim = [0.1f64, 0.0, 0.0]; // ⅓‖c‖ ≈ 0.033 < 0.05
        let z = [0.0f64; 3];
        let feature = Grid::from_vec(1, 4, vec![c, z, z, dim]).unwrap();
        let body = Grid::from_vec(1, 4, vec![c, c, z, z]).unwrap();
        let gt = make_explanation(&feature, &body, 0.05, 0.05);
        assert_eq!(gt.as_slice(), &[0.9, 0.4, 0.0, 0.0]);
    }

    #[test]
    fn empty_class_ignores_everything() {
        let a = Assignment::default_for(CellClass::Empty);
        assert!([a.border, a.inner, a.skeleton, a.tails]
            .iter()
            .all(|r| *r == Role::Ignore));
    }
}
