//! Procedural cell images and their ground-truth heatmaps.
//!
//! Ten classes are rendered: circular cells (0–2, optionally with a minus or
//! plus skeleton), rectangular cells (3–5, differing only in dominant color),
//! circular cells with 1, 3 or 8 tails (6–8) and an empty image (9). Each
//! sample carries a heatmap with 0.9 on the class-discriminative part, 0.4 on
//! the rest of the cell and 0 elsewhere.

mod background;
mod compose;
mod explain;
pub mod mask;
mod shapes;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use background::make_background;
pub use compose::{compose_sample, draw_params, render_body, GeneratorConfig, Sample};
pub use explain::{explain_body, make_explanation, Assignment, Role, GT_FEATURE, GT_LOCALIZATION};
pub use shapes::{
    build_basic_ball_body, build_ccell_body, build_rect_cell, build_tailed_cell, CellBody,
    ColorVariant, SkeletonVariant,
};

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("invalid cell parameters: {0}")]
    InvalidParams(String),
    #[error("cell extent {extent:.2} px around ({x0:.2}, {y0:.2}) does not fit a {height}x{width} image with margin {margin}")]
    DoesNotFit {
        x0: f64,
        y0: f64,
        extent: f64,
        margin: f64,
        height: usize,
        width: usize,
    },
}

/// The ten cell classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CellClass {
    CCell,
    CCellM,
    CCellP,
    RCell,
    RCellB,
    RCellC,
    CCellT,
    CCellT3,
    CCellT8,
    Empty,
}

impl CellClass {
    pub const ALL: [CellClass; 10] = [
        CellClass::CCell,
        CellClass::CCellM,
        CellClass::CCellP,
        CellClass::RCell,
        CellClass::RCellB,
        CellClass::RCellC,
        CellClass::CCellT,
        CellClass::CCellT3,
        CellClass::CCellT8,
        CellClass::Empty,
    ];

    pub fn id(self) -> u8 {
        self as u8
    }

    pub fn from_id(id: u8) -> Option<Self> {
        Self::ALL.get(usize::from(id)).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            CellClass::CCell => "CCell",
            CellClass::CCellM => "CCellM",
            CellClass::CCellP => "CCellP",
            CellClass::RCell => "RCell",
            CellClass::RCellB => "RCellB",
            CellClass::RCellC => "RCellC",
            CellClass::CCellT => "CCellT",
            CellClass::CCellT3 => "CCellT3",
            CellClass::CCellT8 => "CCellT8",
            CellClass::Empty => "Empty",
        }
    }

    pub fn is_circular(self) -> bool {
        self.id() <= 2
    }

    pub fn is_rectangular(self) -> bool {
        (3..=5).contains(&self.id())
    }

    /// Number of tails for classes 6–8, zero otherwise.
    pub fn tail_count(self) -> usize {
        match self {
            CellClass::CCellT => 1,
            CellClass::CCellT3 => 3,
            CellClass::CCellT8 => 8,
            _ => 0,
        }
    }
}

impl std::fmt::Display for CellClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} ({})", self.name(), self.id())
    }
}

/// Background texture: 1 dark, 2 mid-gray gradient, 3 bright speckle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum BackgroundType {
    Dark = 1,
    Gradient = 2,
    Speckle = 3,
}

impl BackgroundType {
    pub const ALL: [BackgroundType; 3] = [
        BackgroundType::Dark,
        BackgroundType::Gradient,
        BackgroundType::Speckle,
    ];

    pub fn id(self) -> u8 {
        self as u8
    }

    pub fn from_id(id: u8) -> Option<Self> {
        match id {
            1 => Some(BackgroundType::Dark),
            2 => Some(BackgroundType::Gradient),
            3 => Some(BackgroundType::Speckle),
            _ => None,
        }
    }
}

impl TryFrom<u8> for BackgroundType {
    type Error = String;

    fn try_from(id: u8) -> Result<Self, Self::Error> {
        Self::from_id(id).ok_or_else(|| format!("background type must be 1, 2 or 3, got {id}"))
    }
}

impl From<BackgroundType> for u8 {
    fn from(b: BackgroundType) -> u8 {
        b.id()
    }
}

/// Per-cell RGB colors before any channel permutation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellColors {
    pub border: [f64; 3],
    pub inner: [f64; 3],
    /// Skeleton and tail color.
    pub feature: [f64; 3],
}

impl Default for CellColors {
    fn default() -> Self {
        Self {
            border: [0.85, 0.7, 0.25],
            inner: [0.45, 0.55, 0.75],
            feature: [0.2, 0.15, 0.6],
        }
    }
}

impl CellColors {
    /// Colors of the red rectangular cell; other rectangle variants permute channels.
    pub fn rect_red() -> Self {
        Self {
            border: [0.8, 0.1, 0.1],
            inner: [0.5, 0.35, 0.35],
            feature: [0.8, 0.1, 0.1],
        }
    }

    /// Adds the same per-channel offset to every color.
    pub fn jittered(mut self, jitter: [f64; 3]) -> Self {
        for c in [&mut self.border, &mut self.inner, &mut self.feature] {
            for (v, d) in c.iter_mut().zip(jitter) {
                *v = (*v + d).clamp(0.0, 1.0);
            }
        }
        self
    }
}

/// Geometry and appearance of one cell. Lengths are in pixels, angles in radians.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellParams {
    /// Cell center `(x0, y0)` as (column, row).
    pub center: (f64, f64),
    pub radius: f64,
    /// Border thickness `t`.
    pub border: f64,
    /// Ellipse factor `y_s`: vertical semi-axis is `radius * ellipse`.
    pub ellipse: f64,
    pub rotation: f64,
    /// Bar thickness `t_b` of the minus/plus skeleton.
    pub bar: Option<f64>,
    /// Pole thickness `t_p` of the plus skeleton.
    pub pole: Option<f64>,
    /// Pole half-length factor `v_s`: the pole spans `radius * stretch`.
    pub stretch: f64,
    /// Rectangle half-height as a fraction of the half-width (`radius`).
    pub aspect: f64,
    /// Standard deviation of the Gaussian boundary noise.
    pub noise: f64,
    pub noise_seed: u64,
    /// Binarization threshold for the discriminative layer (`th_d`).
    pub th_feature: f64,
    /// Binarization threshold for the localization layer (`th_l`).
    pub th_body: f64,
    /// Absolute tail directions, empty for non-tailed cells.
    pub tail_angles: Vec<f64>,
    pub tail_length: f64,
    /// Tail width at its base; tails taper towards the tip.
    pub tail_width: f64,
    pub colors: CellColors,
}

impl CellParams {
    /// Noise-free circular cell with default thresholds; a convenient starting point.
    pub fn circle(center: (f64, f64), radius: f64, border: f64) -> Self {
        Self {
            center,
            radius,
            border,
            ellipse: 1.0,
            rotation: 0.0,
            bar: None,
            pole: None,
            stretch: 1.0,
            aspect: 1.0,
            noise: 0.0,
            noise_seed: 0,
            th_feature: 0.05,
            th_body: 0.05,
            tail_angles: Vec::new(),
            tail_length: 1.5 * radius,
            tail_width: border,
            colors: CellColors::default(),
        }
    }

    pub(crate) fn check_basic(&self) -> Result<(), GeometryError> {
        let bad = |msg: &str| Err(GeometryError::InvalidParams(msg.to_string()));
        let finite = [
            self.center.0,
            self.center.1,
            self.radius,
            self.border,
            self.ellipse,
            self.rotation,
            self.stretch,
            self.aspect,
            self.noise,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return bad("non-finite parameter");
        }
        if !(self.border > 0.0) {
            return bad("border thickness must be positive");
        }
        if !(self.radius > self.border) {
            return bad("radius must exceed border thickness");
        }
        if !(self.ellipse > 0.0) || !(self.stretch > 0.0) || !(self.aspect > 0.0) {
            return bad("ellipse, stretch and aspect factors must be positive");
        }
        if self.noise < 0.0 {
            return bad("noise scale must be non-negative");
        }
        Ok(())
    }

    pub(crate) fn check_fit(&self, extent: f64, margin: f64, dims: (usize, usize)) -> Result<(), GeometryError> {
        let (h, w) = dims;
        let (x0, y0) = self.center;
        let need = extent + margin;
        let fits = x0 >= need
            && y0 >= need
            && (w as f64 - 1.0 - x0) >= need
            && (h as f64 - 1.0 - y0) >= need;
        if fits {
            Ok(())
        } else {
            Err(GeometryError::DoesNotFit {
                x0,
                y0,
                extent,
                margin,
                height: h,
                width: w,
            })
        }
    }

    /// Extent of a circular/elliptical body including an optional pole.
    pub fn ball_extent(&self) -> f64 {
        let pole = if self.pole.is_some() { self.stretch } else { 0.0 };
        self.radius * 1f64.max(self.ellipse).max(pole)
    }

    /// Extent of a rotated rectangle: its half-diagonal.
    pub fn rect_extent(&self) -> f64 {
        self.radius.hypot(self.radius * self.aspect)
    }

    pub fn tailed_extent(&self) -> f64 {
        self.radius * self.ellipse.max(1.0) + self.tail_length
    }
}

/// Fit margin (pixels) applied on top of a cell's extent.
pub const DEFAULT_MARGIN: f64 = 4.0;

#[cfg(test)]
mod tests;
