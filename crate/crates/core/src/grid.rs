//! Row-major 2-D and channel-major 3-D arrays.

use serde::{Deserialize, Serialize};

/// Row-major `height × width` array.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Grid<T> {
    height: usize,
    width: usize,
    data: Vec<T>,
}

/// Binary pixel mask.
pub type Mask = Grid<bool>;

impl<T: Clone> Grid<T> {
    pub fn filled(height: usize, width: usize, value: T) -> Self {
        Self {
            height,
            width,
            data: vec![value; height * width],
        }
    }
}

impl<T> Grid<T> {
    /// Wraps a row-major buffer. `None` if the length does not match.
    pub fn from_vec(height: usize, width: usize, data: Vec<T>) -> Option<Self> {
        (data.len() == height * width).then_some(Self {
            height,
            width,
            data,
        })
    }

    pub fn from_fn(height: usize, width: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(height * width);
        for i in 0..height {
            for j in 0..width {
                data.push(f(i, j));
            }
        }
        Self {
            height,
            width,
            data,
        }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.height, self.width)
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.width + j]
    }

    #[inline]
    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.data[i * self.width + j]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.data.iter()
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Grid<U> {
        Grid {
            height: self.height,
            width: self.width,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Element-wise combination of two equally sized grids.
    ///
    /// # Panics
    /// If the dimensions differ.
    pub fn zip_map<U, V>(&self, other: &Grid<U>, mut f: impl FnMut(&T, &U) -> V) -> Grid<V> {
        assert_eq!(self.dims(), other.dims(), "grid dimensions differ");
        Grid {
            height: self.height,
            width: self.width,
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }
}

impl Mask {
    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }

    pub fn and(&self, other: &Mask) -> Mask {
        self.zip_map(other, |&a, &b| a && b)
    }

    pub fn or(&self, other: &Mask) -> Mask {
        self.zip_map(other, |&a, &b| a || b)
    }

    pub fn and_not(&self, other: &Mask) -> Mask {
        self.zip_map(other, |&a, &b| a && !b)
    }

    pub fn any(&self) -> bool {
        self.data.iter().any(|&b| b)
    }
}

/// Channel-major `channels × height × width` array.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Planes<T> {
    channels: usize,
    height: usize,
    width: usize,
    data: Vec<T>,
}

impl<T: Clone> Planes<T> {
    pub fn filled(channels: usize, height: usize, width: usize, value: T) -> Self {
        Self {
            channels,
            height,
            width,
            data: vec![value; channels * height * width],
        }
    }

    /// Single-channel planes holding a copy of `grid`.
    pub fn from_grid(grid: &Grid<T>) -> Self {
        Self::replicate(grid, 1)
    }

    /// `channels` identical copies of `grid`.
    pub fn replicate(grid: &Grid<T>, channels: usize) -> Self {
        let mut data = Vec::with_capacity(channels * grid.len());
        for _ in 0..channels {
            data.extend_from_slice(grid.as_slice());
        }
        Self {
            channels,
            height: grid.height(),
            width: grid.width(),
            data,
        }
    }

    /// Copy of channel `c` as a grid.
    pub fn channel(&self, c: usize) -> Grid<T> {
        let n = self.height * self.width;
        Grid::from_vec(self.height, self.width, self.data[c * n..(c + 1) * n].to_vec())
            .expect("plane length")
    }
}

impl<T> Planes<T> {
    pub fn from_vec(channels: usize, height: usize, width: usize, data: Vec<T>) -> Option<Self> {
        (data.len() == channels * height * width).then_some(Self {
            channels,
            height,
            width,
            data,
        })
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Planes<U> {
        Planes {
            channels: self.channels,
            height: self.height,
            width: self.width,
            data: self.data.iter().map(f).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_major_indexing() {
        let g = Grid::from_fn(2, 3, |i, j| i * 10 + j);
        assert_eq!(g.as_slice(), &[0, 1, 2, 10, 11, 12]);
        assert_eq!(*g.get(1, 2), 12);
        assert!(Grid::from_vec(2, 2, vec![0u8; 3]).is_none());
    }

    #[test]
    fn planes_channels() {
        let g = Grid::from_fn(2, 2, |i, j| (i + j) as f32);
        let p = Planes::replicate(&g, 3);
        assert_eq!(p.channels(), 3);
        assert_eq!(p.channel(2), g);
    }
}
