//! Gallery images: one row per sample, columns image | h0 | [channels] | h | S(t_0) | S(t_last).

use cellbench::scoring::{stratify, Pipeline};
use cellbench::{Grid, Planes};
use image::{Rgb, RgbImage};

use crate::error::Result;

const GAP: u32 = 2;
const WHITE: Rgb<u8> = Rgb([255, 255, 255]);

/// Diverging colormap: 1 → red, 0 → white, −1 → blue.
pub fn diverging(v: f64) -> Rgb<u8> {
    let v = v.clamp(-1.0, 1.0);
    let fade = |a: f64| (255.0 * (1.0 - a)).round() as u8;
    if v >= 0.0 {
        Rgb([255, fade(v), fade(v)])
    } else {
        Rgb([fade(-v), fade(-v), 255])
    }
}

pub type Tile = Grid<Rgb<u8>>;

pub fn rgb_tile(image: &Grid<[f32; 3]>) -> Tile {
    image.map(|p| Rgb(p.map(|v| (v.clamp(0.0, 1.0) * 255.0).round() as u8)))
}

pub fn heat_tile(h: &Grid<f64>, scale: f64) -> Tile {
    h.map(|&v| diverging(if scale > 0.0 { v / scale } else { 0.0 }))
}

/// Tiles of one gallery row for a candidate heatmap.
pub fn sample_row(
    image: &Grid<[f32; 3]>,
    h0: &Grid<f64>,
    candidate: &Planes<f64>,
    pipeline: &Pipeline<f64>,
) -> Result<Vec<Tile>> {
    let mut row = vec![rgb_tile(image), heat_tile(h0, 1.0)];
    if candidate.channels() > 1 {
        let peak = candidate.as_slice().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        row.extend((0..candidate.channels()).map(|c| heat_tile(&candidate.channel(c), peak)));
    }
    let h = pipeline.adjust(candidate)?;
    row.push(heat_tile(&h, 1.0));
    for m in [0, pipeline.family.n_soft()] {
        let s = stratify(&h, &pipeline.family.member(m))?;
        row.push(s.bands().map(|&b| diverging(f64::from(b) / 2.0)));
    }
    Ok(row)
}

/// Lays rows out on a white canvas with a small gap between tiles.
pub fn compose(rows: &[Vec<Tile>]) -> RgbImage {
    let tile_h = rows.iter().flatten().map(|t| t.height()).max().unwrap_or(0) as u32;
    let tile_w = rows.iter().flatten().map(|t| t.width()).max().unwrap_or(0) as u32;
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0) as u32;
    let width = cols * tile_w + cols.saturating_sub(1) * GAP;
    let height = rows.len() as u32 * tile_h + (rows.len() as u32).saturating_sub(1) * GAP;
    let mut canvas = RgbImage::from_pixel(width.max(1), height.max(1), WHITE);
    for (r, row) in rows.iter().enumerate() {
        for (c, tile) in row.iter().enumerate() {
            let (x0, y0) = (c as u32 * (tile_w + GAP), r as u32 * (tile_h + GAP));
            for i in 0..tile.height() {
                for j in 0..tile.width() {
                    canvas.put_pixel(x0 + j as u32, y0 + i as u32, *tile.get(i, j));
                }
            }
        }
    }
    canvas
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn colormap_endpoints() {
        assert_eq!(diverging(0.0), WHITE);
        assert_eq!(diverging(1.0), Rgb([255, 0, 0]));
        assert_eq!(diverging(-1.0), Rgb([0, 0, 255]));
        assert_eq!(diverging(0.5), Rgb([255, 128, 128]));
        assert_eq!(diverging(7.0), Rgb([255, 0, 0]));
    }

    #[test]
    fn rows_and_gaps() {
        let t = Grid::filled(4, 3, Rgb([0, 0, 0]));
        let img = compose(&[vec![t.clone(), t.clone()], vec![t]]);
        assert_eq!(img.dimensions(), (3 * 2 + GAP, 4 * 2 + GAP));
        assert_eq!(*img.get_pixel(3, 0), WHITE);
        assert_eq!(*img.get_pixel(5, 6), WHITE);
        assert_eq!(*img.get_pixel(0, 6), Rgb([0, 0, 0]));
    }
}
