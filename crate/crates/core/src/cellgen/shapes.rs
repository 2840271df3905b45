//! Cell body rasterization.
//!
//! Shapes are evaluated per output pixel in the cell's local frame: the pixel
//! offset from the center is rotated by `-θ`, so rotation and shifting happen
//! without resampling a raster.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::{CellParams, GeometryError, DEFAULT_MARGIN};
use crate::grid::{Grid, Mask};
use crate::scalar::Scalar;
use crate::seed::rng_from;

/// Rendered cell: RGB body (zero outside the cell) and its part masks.
#[derive(Clone, Debug, PartialEq)]
pub struct CellBody<T> {
    pub ball: Grid<[T; 3]>,
    pub border: Mask,
    pub inner: Mask,
    pub skeleton: Option<Mask>,
    pub tails: Option<Mask>,
}

impl<T: Scalar> CellBody<T> {
    /// Every pixel covered by some part of the cell.
    pub fn footprint(&self) -> Mask {
        let mut m = self.border.or(&self.inner);
        if let Some(s) = &self.skeleton {
            m = m.or(s);
        }
        if let Some(t) = &self.tails {
            m = m.or(t);
        }
        m
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SkeletonVariant {
    Minus,
    Plus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColorVariant {
    Red,
    Green,
    Blue,
}

impl ColorVariant {
    /// Moves the red channel to this variant's dominant channel.
    pub fn permute<V: Copy>(self, c: [V; 3]) -> [V; 3] {
        match self {
            ColorVariant::Red => c,
            ColorVariant::Green => [c[1], c[0], c[2]],
            ColorVariant::Blue => [c[2], c[1], c[0]],
        }
    }
}

/// Per-pixel local frame: `(u, v)` is the rotated offset from the center.
struct Frame<T> {
    x0: T,
    y0: T,
    cos: T,
    sin: T,
}

impl<T: Scalar> Frame<T> {
    fn new(p: &CellParams) -> Self {
        Self {
            x0: T::lit(p.center.0),
            y0: T::lit(p.center.1),
            cos: T::lit(p.rotation.cos()),
            sin: T::lit(p.rotation.sin()),
        }
    }

    #[inline]
    fn local(&self, i: usize, j: usize) -> (T, T) {
        let dx = T::from_usize(j).unwrap() - self.x0;
        let dy = T::from_usize(i).unwrap() - self.y0;
        (self.cos * dx + self.sin * dy, self.cos * dy - self.sin * dx)
    }
}

fn noise_field<T: Scalar, R: Rng>(rng: &mut R, sigma: f64, dims: (usize, usize)) -> Grid<T> {
    let (h, w) = dims;
    if sigma == 0.0 {
        return Grid::filled(h, w, T::zero());
    }
    let normal = Normal::new(0.0, sigma).expect("finite sigma");
    Grid::from_fn(h, w, |_, _| T::lit(normal.sample(rng)))
}

fn rgb<T: Scalar>(c: [f64; 3]) -> [T; 3] {
    [T::lit(c[0]), T::lit(c[1]), T::lit(c[2])]
}

fn paint<T: Scalar>(ball: &mut Grid<[T; 3]>, mask: &Mask, color: [T; 3]) {
    for (px, &m) in ball.as_mut_slice().iter_mut().zip(mask.iter()) {
        if m {
            *px = color;
        }
    }
}

fn fit_margin(p: &CellParams) -> f64 {
    DEFAULT_MARGIN + 3.0 * p.noise
}

/// Noisy elliptical ball: returns `(border, inner)` masks.
fn ball_masks<T: Scalar, R: Rng>(p: &CellParams, dims: (usize, usize), rng: &mut R) -> (Mask, Mask) {
    let (h, w) = dims;
    let frame = Frame::<T>::new(p);
    let noise: Grid<T> = noise_field(rng, p.noise, dims);
    let r = T::lit(p.radius);
    let rt = T::lit(p.radius - p.border);
    let ys = T::lit(p.ellipse);
    let d = Grid::from_fn(h, w, |i, j| {
        let (u, v) = frame.local(i, j);
        let vs = v / ys;
        (u * u + vs * vs).sqrt() + *noise.get(i, j)
    });
    let border = d.map(|&d| d <= r && d >= rt);
    let inner = d.map(|&d| d < rt);
    (border, inner)
}

/// Circular (optionally elliptical) cell with a border band.
///
/// `d = sqrt(x² + (y/y_s)²) + noise`, border where `r - t <= d <= r`, inner
/// where `d < r - t`.
pub fn build_basic_ball_body<T: Scalar>(
    params: &CellParams,
    dims: (usize, usize),
) -> Result<CellBody<T>, GeometryError> {
    params.check_basic()?;
    params.check_fit(params.ball_extent(), fit_margin(params), dims)?;
    let mut rng = rng_from(params.noise_seed);
    let (border, inner) = ball_masks::<T, _>(params, dims, &mut rng);
    let mut ball = Grid::filled(dims.0, dims.1, [T::zero(); 3]);
    paint(&mut ball, &border, rgb(params.colors.border));
    paint(&mut ball, &inner, rgb(params.colors.inner));
    Ok(CellBody {
        ball,
        border,
        inner,
        skeleton: None,
        tails: None,
    })
}

/// Circular cell with a minus (bar) or plus (bar and pole) skeleton.
///
/// The skeleton is evaluated on coordinates jittered by independent noise
/// added on the unrotated mesh.
pub fn build_ccell_body<T: Scalar>(
    params: &CellParams,
    dims: (usize, usize),
    variant: SkeletonVariant,
) -> Result<CellBody<T>, GeometryError> {
    params.check_basic()?;
    let bar_t = params
        .bar
        .filter(|t| t.is_finite() && *t > 0.0)
        .ok_or_else(|| GeometryError::InvalidParams("skeleton requires a positive bar thickness".into()))?;
    let pole_t = match variant {
        SkeletonVariant::Minus => None,
        SkeletonVariant::Plus => Some(params.pole.filter(|t| t.is_finite() && *t > 0.0).ok_or_else(|| {
            GeometryError::InvalidParams("plus skeleton requires a positive pole thickness".into())
        })?),
    };
    let extent = match variant {
        SkeletonVariant::Minus => params.radius * params.ellipse.max(1.0),
        SkeletonVariant::Plus => params.radius * params.ellipse.max(1.0).max(params.stretch),
    };
    params.check_fit(extent, fit_margin(params), dims)?;

    let mut rng = rng_from(params.noise_seed);
    let (border, inner) = ball_masks::<T, _>(params, dims, &mut rng);
    let nx: Grid<T> = noise_field(&mut rng, params.noise, dims);
    let ny: Grid<T> = noise_field(&mut rng, params.noise, dims);

    let frame = Frame::<T>::new(params);
    let r = T::lit(params.radius);
    let half_bar = T::lit(bar_t / 2.0);
    let pole_len = T::lit(params.radius * params.stretch);
    let half_pole = pole_t.map(|t| T::lit(t / 2.0));
    let skeleton = Grid::from_fn(dims.0, dims.1, |i, j| {
        let (u, v) = frame.local(i, j);
        let (u, v) = (u + *nx.get(i, j), v + *ny.get(i, j));
        let bar = u.abs() <= r && v.abs() <= half_bar;
        // the pole only adds pixels not already on the bar
        let pole = half_pole.is_some_and(|hp| v.abs() <= pole_len && u.abs() <= hp);
        bar || (pole && !bar)
    });

    let mut ball = Grid::filled(dims.0, dims.1, [T::zero(); 3]);
    paint(&mut ball, &border, rgb(params.colors.border));
    paint(&mut ball, &inner, rgb(params.colors.inner));
    paint(&mut ball, &skeleton, rgb(params.colors.feature));
    Ok(CellBody {
        ball,
        border,
        inner,
        skeleton: Some(skeleton),
        tails: None,
    })
}

/// Rotated rectangle with half-width `radius`, half-height `radius * aspect`
/// and a border band of thickness `t`. Colors are the red-variant palette
/// permuted onto `variant`'s dominant channel.
pub fn build_rect_cell<T: Scalar>(
    params: &CellParams,
    dims: (usize, usize),
    variant: ColorVariant,
) -> Result<CellBody<T>, GeometryError> {
    params.check_basic()?;
    if params.radius * params.aspect <= params.border {
        return Err(GeometryError::InvalidParams(
            "rectangle half-height must exceed border thickness".into(),
        ));
    }
    params.check_fit(params.rect_extent(), fit_margin(params), dims)?;

    let mut rng = rng_from(params.noise_seed);
    let noise: Grid<T> = noise_field(&mut rng, params.noise, dims);
    let frame = Frame::<T>::new(params);
    let a = T::lit(params.radius);
    let b = T::lit(params.radius * params.aspect);
    let t = T::lit(params.border);
    // signed distance-like box coordinate: <= 0 inside the rectangle
    let d = Grid::from_fn(dims.0, dims.1, |i, j| {
        let (u, v) = frame.local(i, j);
        (u.abs() - a).max(v.abs() - b) + *noise.get(i, j)
    });
    let border = d.map(|&d| d <= T::zero() && d >= -t);
    let inner = d.map(|&d| d < -t);

    let mut ball = Grid::filled(dims.0, dims.1, [T::zero(); 3]);
    paint(&mut ball, &border, rgb(variant.permute(params.colors.border)));
    paint(&mut ball, &inner, rgb(variant.permute(params.colors.inner)));
    Ok(CellBody {
        ball,
        border,
        inner,
        skeleton: None,
        tails: None,
    })
}

/// Minimum tail width at the tip, keeping each tail 8-connected when rasterized.
const MIN_TIP_WIDTH: f64 = 1.5;

/// Circular cell with `tail_count` tapered tails radiating from its border.
///
/// Tails occupy the pixels of a tapered quadrilateral lying outside the
/// noise-free circle of radius `r`; they are removed from the body masks.
pub fn build_tailed_cell<T: Scalar>(
    params: &CellParams,
    dims: (usize, usize),
    tail_count: usize,
) -> Result<CellBody<T>, GeometryError> {
    params.check_basic()?;
    if !matches!(tail_count, 1 | 3 | 8) {
        return Err(GeometryError::InvalidParams(format!(
            "tail count must be 1, 3 or 8, got {tail_count}"
        )));
    }
    if params.tail_angles.len() != tail_count {
        return Err(GeometryError::InvalidParams(format!(
            "expected {tail_count} tail angles, got {}",
            params.tail_angles.len()
        )));
    }
    if !(params.tail_length > 0.0) || !(params.tail_width > 0.0) {
        return Err(GeometryError::InvalidParams(
            "tail length and width must be positive".into(),
        ));
    }
    params.check_fit(params.tailed_extent(), fit_margin(params), dims)?;

    let mut rng = rng_from(params.noise_seed);
    let (mut border, mut inner) = ball_masks::<T, _>(params, dims, &mut rng);

    let x0 = T::lit(params.center.0);
    let y0 = T::lit(params.center.1);
    let r = T::lit(params.radius);
    let ys = T::lit(params.ellipse);
    let start = T::lit(params.radius - params.border);
    let len = T::lit(params.tail_length + params.border);
    let base = T::lit(params.tail_width / 2.0);
    let tip = T::lit((params.tail_width / 3.0).max(MIN_TIP_WIDTH) / 2.0);
    let dirs: Vec<(T, T)> = params
        .tail_angles
        .iter()
        .map(|a| (T::lit(a.cos()), T::lit(a.sin())))
        .collect();
    let tails = Grid::from_fn(dims.0, dims.1, |i, j| {
        let dx = T::from_usize(j).unwrap() - x0;
        let dy = T::from_usize(i).unwrap() - y0;
        let dyy = dy / ys;
        if (dx * dx + dyy * dyy).sqrt() <= r {
            return false;
        }
        dirs.iter().any(|&(c, s)| {
            let along = dx * c + dy * s - start;
            if along < T::zero() || along > len {
                return false;
            }
            let across = (dy * c - dx * s).abs();
            across <= base + (tip - base) * (along / len)
        })
    });
    border = border.and_not(&tails);
    inner = inner.and_not(&tails);

    let mut ball = Grid::filled(dims.0, dims.1, [T::zero(); 3]);
    paint(&mut ball, &border, rgb(params.colors.border));
    paint(&mut ball, &inner, rgb(params.colors.inner));
    paint(&mut ball, &tails, rgb(params.colors.feature));
    Ok(CellBody {
        ball,
        border,
        inner,
        skeleton: None,
        tails: Some(tails),
    })
}
