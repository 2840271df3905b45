//! Mock explanation methods with controlled pathologies.
//!
//! Each mock derives a candidate heatmap from the ground truth, standing in
//! for a real attribution method so the scoring pipeline can be validated
//! without a trained network.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use thiserror::Error;

use crate::cellgen::mask::inner_boundary;
use crate::cellgen::GT_FEATURE;
use crate::grid::{Grid, Planes};
use crate::scalar::Scalar;
use crate::seed::rng_from;

pub const DEFAULT_LATTICE_SPACING: usize = 16;
pub const DEFAULT_LATTICE_AMPLITUDE: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MockKind {
    /// The ground truth itself.
    Perfect,
    /// Each nonzero pixel zeroed independently with probability `p`.
    Dropout(f64),
    /// Ground truth restricted to the boundary of its support.
    EdgeOnly,
    /// Ground truth with spikes of height `amplitude` on a regular grid.
    Lattice { spacing: usize, amplitude: f64 },
    /// Discriminative region negated.
    SignFlipped,
    /// Box blur of the given radius.
    Blurred(usize),
    Zero,
}

#[derive(Debug, Error, PartialEq)]
pub enum MockError {
    #[error("unknown mock method '{0}'")]
    Unknown(String),
    #[error("invalid mock parameter in '{0}'")]
    BadParameter(String),
}

/// A mock method and the channel layout it emits.
#[derive(Clone, Debug, PartialEq)]
pub struct MockMethod {
    pub kind: MockKind,
    /// 1 (default) or 3; three channels replicate the same values.
    pub channels: usize,
}

impl MockMethod {
    pub fn new(kind: MockKind) -> Result<Self, MockError> {
        let ok = match kind {
            MockKind::Dropout(p) => (0.0..=1.0).contains(&p),
            MockKind::Lattice { spacing, amplitude } => spacing >= 2 && amplitude.is_finite(),
            _ => true,
        };
        if !ok {
            return Err(MockError::BadParameter(kind_tag(&kind)));
        }
        Ok(Self { kind, channels: 1 })
    }

    pub fn with_channels(mut self, channels: usize) -> Self {
        self.channels = if channels == 3 { 3 } else { 1 };
        self
    }

    /// Canonical tag, e.g. `mock:dropout:0.5`; parseable by [`FromStr`].
    pub fn tag(&self) -> String {
        let base = kind_tag(&self.kind);
        if self.channels == 3 {
            format!("{base}:rgb")
        } else {
            base
        }
    }
}

fn kind_tag(kind: &MockKind) -> String {
    match kind {
        MockKind::Perfect => "mock:perfect".into(),
        MockKind::Dropout(p) => format!("mock:dropout:{p}"),
        MockKind::EdgeOnly => "mock:edge_only".into(),
        MockKind::Lattice { spacing, amplitude } => format!("mock:lattice:{spacing}:{amplitude}"),
        MockKind::SignFlipped => "mock:sign_flipped".into(),
        MockKind::Blurred(r) => format!("mock:blurred:{r}"),
        MockKind::Zero => "mock:zero".into(),
    }
}

impl fmt::Display for MockMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

impl FromStr for MockMethod {
    type Err = MockError;

    /// Parses `mock:<kind>[:params][:rgb]`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let rest = s.strip_prefix("mock:").ok_or_else(|| MockError::Unknown(s.into()))?;
        let mut parts: Vec<&str> = rest.split(':').collect();
        let channels = if parts.last() == Some(&"rgb") {
            parts.pop();
            3
        } else {
            1
        };
        let bad = || MockError::BadParameter(s.into());
        let num = |v: Option<&&str>| -> Result<f64, MockError> { v.ok_or_else(bad)?.parse().map_err(|_| bad()) };
        let kind = match parts.as_slice() {
            ["perfect"] => MockKind::Perfect,
            ["dropout"] => MockKind::Dropout(0.5),
            ["dropout", _] => MockKind::Dropout(num(parts.get(1))?),
            ["edge_only"] => MockKind::EdgeOnly,
            ["lattice"] => MockKind::Lattice {
                spacing: DEFAULT_LATTICE_SPACING,
                amplitude: DEFAULT_LATTICE_AMPLITUDE,
            },
            ["lattice", sp] => MockKind::Lattice {
                spacing: sp.parse().map_err(|_| bad())?,
                amplitude: DEFAULT_LATTICE_AMPLITUDE,
            },
            ["lattice", sp, _] => MockKind::Lattice {
                spacing: sp.parse().map_err(|_| bad())?,
                amplitude: num(parts.get(2))?,
            },
            ["sign_flipped"] => MockKind::SignFlipped,
            ["blurred"] => MockKind::Blurred(2),
            ["blurred", r] => MockKind::Blurred(r.parse().map_err(|_| bad())?),
            ["zero"] => MockKind::Zero,
            _ => return Err(MockError::Unknown(s.into())),
        };
        Ok(MockMethod::new(kind)?.with_channels(channels))
    }
}

fn box_blur<T: Scalar>(h: &Grid<T>, radius: usize) -> Grid<T> {
    if radius == 0 {
        return h.clone();
    }
    let (rows, cols) = h.dims();
    // summed-area table with a zero border row/column
    let mut sat = vec![T::zero(); (rows + 1) * (cols + 1)];
    let w = cols + 1;
    for i in 0..rows {
        let mut row_sum = T::zero();
        for j in 0..cols {
            row_sum = row_sum + *h.get(i, j);
            sat[(i + 1) * w + j + 1] = sat[i * w + j + 1] + row_sum;
        }
    }
    Grid::from_fn(rows, cols, |i, j| {
        let (i0, j0) = (i.saturating_sub(radius), j.saturating_sub(radius));
        let (i1, j1) = ((i + radius + 1).min(rows), (j + radius + 1).min(cols));
        let s = sat[i1 * w + j1] - sat[i0 * w + j1] - sat[i1 * w + j0] + sat[i0 * w + j0];
        s / T::from_usize((i1 - i0) * (j1 - j0)).unwrap()
    })
}

/// Candidate heatmap produced by `method` for a sample with ground truth `h0`.
///
/// Deterministic in `seed` (only dropout consumes randomness).
pub fn mock_heatmap<T: Scalar>(method: &MockMethod, h0: &Grid<T>, seed: u64) -> Planes<T> {
    let feature = T::lit(GT_FEATURE);
    let half_gap = T::lit(0.25);
    let single = match method.kind {
        MockKind::Perfect => h0.clone(),
        MockKind::Zero => h0.map(|_| T::zero()),
        MockKind::Dropout(p) => {
            let mut rng = rng_from(seed);
            h0.map(|&v| {
                if v != T::zero() && rng.random_bool(p) {
                    T::zero()
                } else {
                    v
                }
            })
        }
        MockKind::EdgeOnly => {
            let edge = inner_boundary(&h0.map(|&v| v != T::zero()));
            h0.zip_map(&edge, |&v, &e| if e { v } else { T::zero() })
        }
        MockKind::Lattice { spacing, amplitude } => {
            let amp = T::lit(amplitude);
            let phase = spacing / 2;
            let mut out = h0.clone();
            for i in (phase..h0.height()).step_by(spacing) {
                for j in (phase..h0.width()).step_by(spacing) {
                    let v = out.get_mut(i, j);
                    *v = v.max(amp);
                }
            }
            out
        }
        MockKind::SignFlipped => h0.map(|&v| {
            if (v - feature).abs() < half_gap {
                -v
            } else {
                v
            }
        }),
        MockKind::Blurred(r) => box_blur(h0, r),
    };
    Planes::replicate(&single, method.channels)
}

/// Per-pixel absolute value, applied before channel adjustment when enabled.
pub fn abs_transform<T: Scalar>(h: &Planes<T>) -> Planes<T> {
    h.map(|v| v.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gt() -> Grid<f64> {
        Grid::from_fn(8, 8, |i, j| match (i, j) {
            (2..=5, 2..=5) if i == 2 || i == 5 || j == 2 || j == 5 => 0.9,
            (2..=5, 2..=5) => 0.4,
            _ => 0.0,
        })
    }

    #[test]
    fn tags_round_trip() {
        for tag in [
            "mock:perfect",
            "mock:dropout:0.5",
            "mock:edge_only",
            "mock:lattice:16:0.5",
            "mock:sign_flipped",
            "mock:blurred:3",
            "mock:zero",
            "mock:perfect:rgb",
        ] {
            let m: MockMethod = tag.parse().unwrap();
            assert_eq!(m.tag(), tag);
        }
        assert_eq!("mock:dropout".parse::<MockMethod>().unwrap().kind, MockKind::Dropout(0.5));
        assert!("mock:dropout:1.5".parse::<MockMethod>().is_err());
        assert!("mock:lattice:1".parse::<MockMethod>().is_err());
        assert!("saliency".parse::<MockMethod>().is_err());
    }

    #[test]
    fn perfect_zero_and_rgb() {
        let h0 = gt();
        let p = mock_heatmap(&MockMethod::new(MockKind::Perfect).unwrap(), &h0, 0);
        assert_eq!(p.channel(0), h0);
        let z = mock_heatmap(&MockMethod::new(MockKind::Zero).unwrap(), &h0, 0);
        assert!(z.as_slice().iter().all(|&v| v == 0.0));
        let rgb = mock_heatmap(&MockMethod::new(MockKind::Perfect).unwrap().with_channels(3), &h0, 0);
        assert_eq!(rgb.channels(), 3);
        assert_eq!(rgb.channel(2), h0);
    }

    #[test]
    fn dropout_only_removes_and_is_seeded() {
        let h0 = Grid::filled(64, 64, 0.4f64);
        let m = MockMethod::new(MockKind::Dropout(0.5)).unwrap();
        let a = mock_heatmap(&m, &h0, 9);
        assert_eq!(a, mock_heatmap(&m, &h0, 9));
        let kept = a.as_slice().iter().filter(|&&v| v == 0.4).count() as f64;
        // 4096 Bernoulli(0.5) trials: 4 sigma = 128
        assert!((kept - 2048.0).abs() < 128.0, "{kept}");
        assert!(a.as_slice().iter().all(|&v| v == 0.0 || v == 0.4));
    }

    #[test]
    fn edge_only_keeps_support_boundary() {
        let e = mock_heatmap(&MockMethod::new(MockKind::EdgeOnly).unwrap(), &gt(), 0).channel(0);
        assert_eq!(e.iter().filter(|&&v| v != 0.0).count(), 12);
        assert!(e.iter().all(|&v| v == 0.0 || v == 0.9));
    }

    #[test]
    fn lattice_adds_spikes_on_a_grid() {
        let h0 = Grid::filled(32, 32, 0.0f64);
        let m = MockMethod::new(MockKind::Lattice {
            spacing: 8,
            amplitude: 0.5,
        })
        .unwrap();
        let l = mock_heatmap(&m, &h0, 0).channel(0);
        assert_eq!(l.iter().filter(|&&v| v == 0.5).count(), 16);
        assert_eq!(*l.get(4, 12), 0.5);
    }

    #[test]
    fn sign_flip_negates_feature_only() {
        let f = mock_heatmap(&MockMethod::new(MockKind::SignFlipped).unwrap(), &gt(), 0);
        assert!(f.as_slice().iter().all(|&v| v == 0.0 || v == 0.4 || v == -0.9));
        assert_eq!(abs_transform(&f).channel(0), gt());
    }

    #[test]
    fn blur_preserves_constant_and_mass_inside() {
        let c = Grid::filled(10, 10, 0.7f64);
        let b = mock_heatmap(&MockMethod::new(MockKind::Blurred(2)).unwrap(), &c, 0).channel(0);
        assert!(b.iter().all(|&v| (v - 0.7).abs() < 1e-12));
        let mut spike = Grid::filled(9, 9, 0.0f64);
        *spike.get_mut(4, 4) = 9.0;
        let b = box_blur(&spike, 1);
        assert_eq!(*b.get(3, 3), 1.0);
        assert_eq!(*b.get(2, 2), 0.0);
        assert_eq!(box_blur(&spike, 0), spike);
    }

    #[test]
    fn abs_is_identity_on_nonnegative_and_idempotent() {
        let p = Planes::from_vec(1, 1, 3, vec![0.0, 0.3, -0.5]).unwrap();
        let a = abs_transform(&p);
        assert_eq!(a.as_slice(), &[0.0, 0.3, 0.5]);
        assert_eq!(abs_transform(&a), a);
    }
}
