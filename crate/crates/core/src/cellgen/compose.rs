use std::f64::consts::TAU;

use rand::Rng;

use super::{
    build_basic_ball_body, build_ccell_body, build_rect_cell, build_tailed_cell, explain_body,
    make_background, Assignment, BackgroundType, CellBody, CellClass, CellColors, CellParams,
    ColorVariant, GeometryError, SkeletonVariant, DEFAULT_MARGIN,
};
use crate::grid::Grid;
use crate::scalar::Scalar;
use crate::seed::rng_from;

/// One generated image with its label and ground-truth heatmap.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample<T> {
    /// RGB values in `[0, 1]`.
    pub image: Grid<[T; 3]>,
    pub label: CellClass,
    pub ground_truth: Grid<T>,
    pub background: BackgroundType,
    /// `None` for the empty class.
    pub params: Option<CellParams>,
}

impl<T> Sample<T> {
    pub fn dims(&self) -> (usize, usize) {
        self.ground_truth.dims()
    }
}

/// Sampling ranges for cell geometry. Lengths given as fractions are relative
/// to the image size (radius) or the radius (thicknesses, tail length).
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorConfig {
    pub image_size: usize,
    pub radius_frac: (f64, f64),
    pub border_frac: (f64, f64),
    pub min_border: f64,
    pub ellipse: (f64, f64),
    pub aspect: (f64, f64),
    pub bar_frac: (f64, f64),
    /// Pole reach `v_s` relative to the ellipse factor.
    pub stretch_frac: (f64, f64),
    pub noise: f64,
    pub tail_length_frac: f64,
    pub color_jitter: f64,
    pub th_feature: f64,
    pub th_body: f64,
    pub assignments: [Assignment; 10],
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            image_size: 224,
            radius_frac: (0.07, 0.12),
            border_frac: (0.12, 0.2),
            min_border: 2.5,
            ellipse: (0.85, 1.15),
            aspect: (0.55, 0.9),
            bar_frac: (0.25, 0.35),
            stretch_frac: (0.8, 0.95),
            noise: 0.5,
            tail_length_frac: 1.5,
            color_jitter: 0.03,
            th_feature: 0.05,
            th_body: 0.05,
            assignments: CellClass::ALL.map(Assignment::default_for),
        }
    }
}

impl GeneratorConfig {
    pub fn with_size(image_size: usize) -> Self {
        Self {
            image_size,
            ..Self::default()
        }
    }
}

fn uniform<R: Rng>(rng: &mut R, (lo, hi): (f64, f64)) -> f64 {
    if hi > lo {
        rng.random_range(lo..hi)
    } else {
        lo
    }
}

/// Tail directions: evenly spaced slots with a random global offset and a
/// per-tail jitter of at most a quarter slot, so neighbors stay at least
/// `2π / (2n)` apart.
fn tail_angles<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let slot = TAU / n as f64;
    let offset = rng.random_range(0.0..TAU);
    (0..n)
        .map(|k| {
            let jitter = rng.random_range(-0.25..0.25) * slot;
            (offset + k as f64 * slot + jitter).rem_euclid(TAU)
        })
        .collect()
}

/// Draws cell parameters for `class`; `None` for the empty class.
pub fn draw_params<R: Rng>(
    class: CellClass,
    config: &GeneratorConfig,
    rng: &mut R,
) -> Result<Option<CellParams>, GeometryError> {
    if class == CellClass::Empty {
        return Ok(None);
    }
    let size = config.image_size as f64;
    let radius = uniform(rng, (config.radius_frac.0 * size, config.radius_frac.1 * size));
    let border = (uniform(rng, config.border_frac) * radius).max(config.min_border);
    let mut p = CellParams::circle((0.0, 0.0), radius, border);
    p.rotation = rng.random_range(0.0..TAU);
    p.noise = config.noise;
    p.noise_seed = rng.random();
    p.th_feature = config.th_feature;
    p.th_body = config.th_body;
    p.tail_length = config.tail_length_frac * radius;
    p.tail_width = border;
    let j = config.color_jitter;
    let jitter = if j > 0.0 {
        [(); 3].map(|_| rng.random_range(-j..j))
    } else {
        [0.0; 3]
    };

    let short_axis = match class.id() {
        0..=2 => {
            p.ellipse = uniform(rng, config.ellipse);
            p.colors = CellColors::default().jittered(jitter);
            if class != CellClass::CCell {
                p.bar = Some(uniform(rng, config.bar_frac) * radius);
            }
            if class == CellClass::CCellP {
                p.pole = Some(uniform(rng, config.bar_frac) * radius);
                p.stretch = uniform(rng, config.stretch_frac) * p.ellipse;
            }
            p.ellipse.min(1.0)
        }
        3..=5 => {
            p.aspect = uniform(rng, config.aspect);
            p.colors = CellColors::rect_red().jittered(jitter);
            p.aspect.min(1.0)
        }
        _ => {
            p.colors = CellColors::default().jittered(jitter);
            p.tail_angles = tail_angles(rng, class.tail_count());
            1.0
        }
    };
    // Small images: keep an inner region inside the border.
    p.border = p.border.min(0.5 * radius * short_axis);
    p.tail_width = p.border;
    let extent = match class.id() {
        0..=2 => p.ball_extent(),
        3..=5 => p.rect_extent(),
        _ => p.tailed_extent(),
    };

    let need = extent + DEFAULT_MARGIN + 3.0 * p.noise;
    let hi = size - 1.0 - need;
    if hi < need {
        return Err(GeometryError::DoesNotFit {
            x0: size / 2.0,
            y0: size / 2.0,
            extent,
            margin: DEFAULT_MARGIN,
            height: config.image_size,
            width: config.image_size,
        });
    }
    p.center = (uniform(rng, (need, hi)), uniform(rng, (need, hi)));
    Ok(Some(p))
}

/// Renders the body of `class` from explicit parameters.
pub fn render_body<T: Scalar>(
    class: CellClass,
    params: &CellParams,
    dims: (usize, usize),
) -> Result<CellBody<T>, GeometryError> {
    match class {
        CellClass::CCell => build_basic_ball_body(params, dims),
        CellClass::CCellM => build_ccell_body(params, dims, SkeletonVariant::Minus),
        CellClass::CCellP => build_ccell_body(params, dims, SkeletonVariant::Plus),
        CellClass::RCell => build_rect_cell(params, dims, ColorVariant::Red),
        CellClass::RCellB => build_rect_cell(params, dims, ColorVariant::Green),
        CellClass::RCellC => build_rect_cell(params, dims, ColorVariant::Blue),
        CellClass::CCellT | CellClass::CCellT3 | CellClass::CCellT8 => {
            build_tailed_cell(params, dims, class.tail_count())
        }
        CellClass::Empty => Err(GeometryError::InvalidParams("the empty class has no body".into())),
    }
}

/// Generates one sample: background, cell drawn over it and ground truth.
///
/// A pure function of its arguments.
pub fn compose_sample<T: Scalar>(
    class: CellClass,
    background: BackgroundType,
    seed: u64,
    config: &GeneratorConfig,
) -> Result<Sample<T>, GeometryError> {
    let dims = (config.image_size, config.image_size);
    let mut rng = rng_from(seed);
    let bg_seed: u64 = rng.random();
    let mut image = make_background::<T>(background, dims, bg_seed);
    let params = draw_params(class, config, &mut rng)?;

    let ground_truth = match &params {
        None => Grid::filled(dims.0, dims.1, T::zero()),
        Some(p) => {
            let body = render_body::<T>(class, p, dims)?;
            let footprint = body.footprint();
            for ((px, cell), &on) in image
                .as_mut_slice()
                .iter_mut()
                .zip(body.ball.iter())
                .zip(footprint.iter())
            {
                if on {
                    *px = *cell;
                }
            }
            explain_body(
                &body,
                &config.assignments[usize::from(class.id())],
                T::lit(p.th_feature),
                T::lit(p.th_body),
            )
        }
    };
    for px in image.as_mut_slice() {
        for v in px.iter_mut() {
            *v = v.max(T::zero()).min(T::one());
        }
    }
    Ok(Sample {
        image,
        label: class,
        ground_truth,
        background,
        params,
    })
}
