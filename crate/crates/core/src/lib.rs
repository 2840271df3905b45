//! Synthetic cell images with pixel-exact ground-truth heatmaps, and
//! five-band scoring of candidate explanation heatmaps against them.
//!
//! Geometry and scoring are generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix the precisions used by the dataset and the CLI.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0)` deliberately rejects NaN

pub mod cellgen;
pub mod dataset;
pub mod grid;
pub mod scalar;
pub mod scoring;
pub mod seed;
pub mod synthgen;

pub use cellgen::{BackgroundType, CellClass, CellParams, GeneratorConfig};
pub use grid::{Grid, Mask, Planes};
pub use scalar::Scalar;

/// Stored sample precision: ground truths are persisted as `f32`.
pub type Sample32 = cellgen::Sample<f32>;
pub type Sample64 = cellgen::Sample<f64>;
pub type Grid32 = Grid<f32>;
pub type Grid64 = Grid<f64>;
pub type Heatmap32 = Planes<f32>;
pub type Heatmap64 = Planes<f64>;
