use std::fs;
use std::path::{Path, PathBuf};

use image::{ImageBuffer, Rgb, RgbImage};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::tensor::{read_tensor, write_tensor, Tensor};
use super::{DatasetError, Role, ShardSpec};
use crate::cellgen::{compose_sample, BackgroundType, CellClass, CellParams, GeneratorConfig, Sample};
use crate::grid::Grid;
use crate::seed::{derive_seed, rng_from};

pub const MANIFEST_FILE: &str = "manifest.json";
const MANIFEST_FORMAT: &str = "cellbench-shard/1";

/// One manifest line: enough to regenerate the sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShardEntry {
    pub index: usize,
    pub class_id: u8,
    pub class_name: String,
    pub background: BackgroundType,
    pub seed: u64,
    pub image: String,
    pub ground_truth: String,
    pub params: Option<CellParams>,
}

impl ShardEntry {
    pub fn class(&self) -> Option<CellClass> {
        CellClass::from_id(self.class_id)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShardManifest {
    pub format: String,
    pub role: Role,
    pub index: usize,
    pub image_size: usize,
    pub dataset_seed: u64,
    pub samples: Vec<ShardEntry>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Shard {
    pub manifest: ShardManifest,
    pub samples: Vec<Sample<f32>>,
}

impl Shard {
    pub fn index(&self) -> usize {
        self.manifest.index
    }

    pub fn role(&self) -> Role {
        self.manifest.role
    }
}

pub fn shard_dir(root: &Path, role: Role, index: usize) -> PathBuf {
    root.join(role.dir_name()).join(format!("shard_{index}"))
}

fn file_names(k: usize) -> (String, String) {
    (format!("sample_{k:04}.png"), format!("sample_{k:04}_gt.fbt"))
}

/// Classes, backgrounds and per-sample seeds of shard `index`, without rendering.
///
/// Each sample draws from its own stream derived from
/// `(spec.seed, role, index, sample)`: classes uniform over the ten classes,
/// backgrounds uniform over the three types.
pub fn plan_shard(spec: &ShardSpec, index: usize) -> Result<ShardManifest, DatasetError> {
    if index >= spec.shard_count {
        return Err(DatasetError::InvalidIndex {
            index,
            count: spec.shard_count,
        });
    }
    let samples = (0..spec.samples_per_shard)
        .map(|k| {
            let mut rng = rng_from(derive_seed(spec.seed, &[spec.role.seed_tag(), index as u64, k as u64]));
            let class = CellClass::ALL[rng.random_range(0..CellClass::ALL.len())];
            let background = BackgroundType::ALL[rng.random_range(0..BackgroundType::ALL.len())];
            let (image, ground_truth) = file_names(k);
            ShardEntry {
                index: k,
                class_id: class.id(),
                class_name: class.name().to_string(),
                background,
                seed: rng.random(),
                image,
                ground_truth,
                params: None,
            }
        })
        .collect();
    Ok(ShardManifest {
        format: MANIFEST_FORMAT.to_string(),
        role: spec.role,
        index,
        image_size: spec.image_size,
        dataset_seed: spec.seed,
        samples,
    })
}

/// Plans and renders shard `index`. Rendering runs on the rayon pool; the
/// result does not depend on the number of threads.
pub fn generate_shard(spec: &ShardSpec, index: usize) -> Result<Shard, DatasetError> {
    let mut manifest = plan_shard(spec, index)?;
    let config = GeneratorConfig::with_size(spec.image_size);
    let samples = manifest
        .samples
        .par_iter()
        .map(|e| {
            let class = e.class().expect("planned class id");
            compose_sample::<f32>(class, e.background, e.seed, &config)
        })
        .collect::<Result<Vec<_>, _>>()?;
    for (entry, sample) in manifest.samples.iter_mut().zip(&samples) {
        entry.params = sample.params.clone();
    }
    Ok(Shard { manifest, samples })
}

fn quantize(v: f32) -> u8 {
    (v.clamp(0.0, 1.0) * 255.0).round() as u8
}

fn to_rgb8(image: &Grid<[f32; 3]>) -> RgbImage {
    let (h, w) = image.dims();
    ImageBuffer::from_fn(w as u32, h as u32, |x, y| Rgb(image.get(y as usize, x as usize).map(quantize)))
}

/// Writes the shard under `dir` (created if needed): manifest, PNG images and
/// ground-truth tensors.
pub fn write_shard(shard: &Shard, dir: &Path) -> Result<(), DatasetError> {
    fs::create_dir_all(dir).map_err(|e| DatasetError::io(dir, e))?;
    shard
        .manifest
        .samples
        .par_iter()
        .zip(shard.samples.par_iter())
        .try_for_each(|(entry, sample)| {
            let img_path = dir.join(&entry.image);
            to_rgb8(&sample.image)
                .save_with_format(&img_path, image::ImageFormat::Png)
                .map_err(|e| DatasetError::Corrupt {
                    path: img_path.clone(),
                    reason: e.to_string(),
                })?;
            let (h, w) = sample.dims();
            let gt = Tensor::new(vec![h, w], sample.ground_truth.as_slice().to_vec()).expect("grid shape");
            let gt_path = dir.join(&entry.ground_truth);
            write_tensor(&gt_path, &gt).map_err(|e| DatasetError::io(&gt_path, e))
        })?;
    let path = dir.join(MANIFEST_FILE);
    let json = serde_json::to_string_pretty(&shard.manifest).expect("manifest serializes");
    fs::write(&path, json + "\n").map_err(|e| DatasetError::io(&path, e))
}

pub fn read_shard_manifest(dir: &Path) -> Result<ShardManifest, DatasetError> {
    let path = dir.join(MANIFEST_FILE);
    let text = fs::read_to_string(&path).map_err(|e| DatasetError::io(&path, e))?;
    let manifest: ShardManifest = serde_json::from_str(&text).map_err(|e| DatasetError::Corrupt {
        path: path.clone(),
        reason: e.to_string(),
    })?;
    if manifest.format != MANIFEST_FORMAT {
        return Err(DatasetError::Corrupt {
            path,
            reason: format!("unsupported manifest format '{}'", manifest.format),
        });
    }
    if let Some(e) = manifest.samples.iter().find(|e| e.class().is_none()) {
        return Err(DatasetError::Corrupt {
            path,
            reason: format!("sample {} has invalid class id {}", e.index, e.class_id),
        });
    }
    Ok(manifest)
}

fn read_sample(dir: &Path, entry: &ShardEntry, size: usize) -> Result<Sample<f32>, DatasetError> {
    let img_path = dir.join(&entry.image);
    let bytes = fs::read(&img_path).map_err(|e| DatasetError::io(&img_path, e))?;
    let img = image::load_from_memory_with_format(&bytes, image::ImageFormat::Png)
        .map_err(|e| DatasetError::Corrupt {
            path: img_path.clone(),
            reason: e.to_string(),
        })?
        .to_rgb8();
    let found = vec![img.height() as usize, img.width() as usize];
    if found != [size, size] {
        return Err(DatasetError::DimensionMismatch {
            path: img_path,
            expected: vec![size, size],
            found,
        });
    }
    let image = Grid::from_fn(size, size, |i, j| {
        img.get_pixel(j as u32, i as u32).0.map(|v| f32::from(v) / 255.0)
    });

    let gt_path = dir.join(&entry.ground_truth);
    let t = read_tensor(&gt_path).map_err(|e| DatasetError::from_tensor(&gt_path, e))?;
    if t.dims != [size, size] {
        return Err(DatasetError::DimensionMismatch {
            path: gt_path,
            expected: vec![size, size],
            found: t.dims,
        });
    }
    let ground_truth = Grid::from_vec(size, size, t.data).expect("checked dims");
    Ok(Sample {
        image,
        label: entry.class().expect("validated class"),
        ground_truth,
        background: entry.background,
        params: entry.params.clone(),
    })
}

/// Loads a shard written by [`write_shard`].
pub fn read_shard(dir: &Path) -> Result<Shard, DatasetError> {
    let manifest = read_shard_manifest(dir)?;
    let samples = manifest
        .samples
        .par_iter()
        .map(|e| read_sample(dir, e, manifest.image_size))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Shard { manifest, samples })
}
