use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::BackgroundType;
use crate::grid::Grid;
use crate::scalar::Scalar;
use crate::seed::rng_from;

const DARK_BASE: [f64; 3] = [0.06, 0.06, 0.08];
const DARK_NOISE: f64 = 0.02;
const GRAY_BASE: f64 = 0.45;
const GRAY_SLOPE: f64 = 0.15;
const GRAY_NOISE: f64 = 0.03;
const SPECKLE_LOW: f64 = 0.55;
const SPECKLE_HIGH: f64 = 0.95;
const SPECKLE_TINT: f64 = 0.04;

/// Full-image background texture, deterministic in `seed`.
///
/// Type 1 is dark with low-amplitude Gaussian noise, type 2 mid-gray with a
/// linear gradient in a random direction, type 3 a bright per-pixel speckle.
pub fn make_background<T: Scalar>(kind: BackgroundType, dims: (usize, usize), seed: u64) -> Grid<[T; 3]> {
    let (h, w) = dims;
    let mut rng = rng_from(seed);
    let px = |c: [f64; 3]| c.map(|v| T::lit(v.clamp(0.0, 1.0)));
    match kind {
        BackgroundType::Dark => {
            let n = Normal::new(0.0, DARK_NOISE).unwrap();
            Grid::from_fn(h, w, |_, _| {
                px([
                    DARK_BASE[0] + n.sample(&mut rng),
                    DARK_BASE[1] + n.sample(&mut rng),
                    DARK_BASE[2] + n.sample(&mut rng),
                ])
            })
        }
        BackgroundType::Gradient => {
            let angle: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            let (s, c) = angle.sin_cos();
            let n = Normal::new(0.0, GRAY_NOISE).unwrap();
            let (hf, wf) = (h.max(1) as f64, w.max(1) as f64);
            Grid::from_fn(h, w, |i, j| {
                let along = (j as f64 / wf - 0.5) * c + (i as f64 / hf - 0.5) * s;
                let g = GRAY_BASE + 2.0 * GRAY_SLOPE * along;
                px([
                    g + n.sample(&mut rng),
                    g + n.sample(&mut rng),
                    g + n.sample(&mut rng),
                ])
            })
        }
        BackgroundType::Speckle => Grid::from_fn(h, w, |_, _| {
            let l: f64 = rng.random_range(SPECKLE_LOW..SPECKLE_HIGH);
            px([
                l + rng.random_range(-SPECKLE_TINT..SPECKLE_TINT),
                l + rng.random_range(-SPECKLE_TINT..SPECKLE_TINT),
                l + rng.random_range(-SPECKLE_TINT..SPECKLE_TINT),
            ])
        }),
    }
}
