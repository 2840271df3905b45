//! Raster utilities on binary masks.

use std::collections::VecDeque;

use crate::grid::{Grid, Mask};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Connectivity {
    Four,
    Eight,
}

impl Connectivity {
    fn offsets(self) -> &'static [(isize, isize)] {
        match self {
            Connectivity::Four => &[(-1, 0), (1, 0), (0, -1), (0, 1)],
            Connectivity::Eight => &[
                (-1, -1),
                (-1, 0),
                (-1, 1),
                (0, -1),
                (0, 1),
                (1, -1),
                (1, 0),
                (1, 1),
            ],
        }
    }
}

/// Labels connected components of `mask`.
///
/// Returns the label grid (0 = background, components numbered from 1 in
/// raster order of their first pixel) and the component count.
pub fn connected_components(mask: &Mask, conn: Connectivity) -> (Grid<u32>, usize) {
    let (h, w) = mask.dims();
    let mut labels = Grid::filled(h, w, 0u32);
    let mut next = 0u32;
    let mut queue = VecDeque::new();
    for i in 0..h {
        for j in 0..w {
            if !*mask.get(i, j) || *labels.get(i, j) != 0 {
                continue;
            }
            next += 1;
            *labels.get_mut(i, j) = next;
            queue.push_back((i, j));
            while let Some((ci, cj)) = queue.pop_front() {
                for &(di, dj) in conn.offsets() {
                    let (ni, nj) = (ci as isize + di, cj as isize + dj);
                    if ni < 0 || nj < 0 || ni >= h as isize || nj >= w as isize {
                        continue;
                    }
                    let (ni, nj) = (ni as usize, nj as usize);
                    if *mask.get(ni, nj) && *labels.get(ni, nj) == 0 {
                        *labels.get_mut(ni, nj) = next;
                        queue.push_back((ni, nj));
                    }
                }
            }
        }
    }
    (labels, next as usize)
}

/// Nearest-neighbor rotation of `mask` by `angle` about `center` (column, row).
pub fn rotate_mask(mask: &Mask, angle: f64, center: (f64, f64)) -> Mask {
    let (h, w) = mask.dims();
    let (s, c) = angle.sin_cos();
    Grid::from_fn(h, w, |i, j| {
        let dx = j as f64 - center.0;
        let dy = i as f64 - center.1;
        // inverse map: source = R(-angle) * destination
        let sx = (c * dx + s * dy + center.0).round();
        let sy = (c * dy - s * dx + center.1).round();
        sx >= 0.0 && sy >= 0.0 && (sx as usize) < w && (sy as usize) < h && *mask.get(sy as usize, sx as usize)
    })
}

/// Pixels of `mask` with at least one 4-neighbor outside the mask or the image.
pub fn inner_boundary(mask: &Mask) -> Mask {
    let (h, w) = mask.dims();
    Grid::from_fn(h, w, |i, j| {
        if !*mask.get(i, j) {
            return false;
        }
        i == 0
            || j == 0
            || i + 1 == h
            || j + 1 == w
            || !*mask.get(i - 1, j)
            || !*mask.get(i + 1, j)
            || !*mask.get(i, j - 1)
            || !*mask.get(i, j + 1)
    })
}
