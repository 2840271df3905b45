use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::shard::{read_shard_manifest, shard_dir};
use super::tensor::{read_tensor, write_tensor, Tensor};
use super::{DatasetError, Role};
use crate::cellgen::CellClass;
use crate::grid::Planes;

pub const ARCHIVE_FILE: &str = "heatmaps.json";
const ARCHIVE_FORMAT: &str = "cellbench-heatmaps/1";

/// Labels and sizes of every sample of one role, read from shard manifests.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DatasetIndex {
    pub role: Option<Role>,
    /// `(shard, sample) -> (true class, image size)`.
    pub samples: BTreeMap<(usize, usize), (CellClass, usize)>,
}

impl DatasetIndex {
    /// Reads `shard_0`, `shard_1`, ... under `<root>/<role>/` until the first
    /// missing directory.
    pub fn load(root: &Path, role: Role) -> Result<Self, DatasetError> {
        let mut samples = BTreeMap::new();
        for k in 0.. {
            let dir = shard_dir(root, role, k);
            if !dir.is_dir() {
                break;
            }
            let m = read_shard_manifest(&dir)?;
            for e in &m.samples {
                samples.insert((k, e.index), (e.class().expect("validated"), m.image_size));
            }
        }
        Ok(Self {
            role: Some(role),
            samples,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn get(&self, shard: usize, sample: usize) -> Option<(CellClass, usize)> {
        self.samples.get(&(shard, sample)).copied()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArchiveEntry {
    pub shard: usize,
    pub sample: usize,
    pub file: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predicted_class: Option<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArchiveManifest {
    pub format: String,
    pub method: String,
    pub role: Role,
    pub entries: Vec<ArchiveEntry>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeatmapEntry {
    pub shard: usize,
    pub sample: usize,
    pub predicted_class: Option<u8>,
    pub heatmap: Planes<f32>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeatmapArchive {
    pub method: String,
    pub role: Role,
    pub entries: Vec<HeatmapEntry>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum RejectionReason {
    UnknownSample,
    Duplicate,
    Unreadable(String),
    BadChannels(usize),
    DimensionMismatch { expected: usize, found: Vec<usize> },
    NonFinite(usize),
}

impl std::fmt::Display for RejectionReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RejectionReason::UnknownSample => f.write_str("no such sample in the dataset"),
            RejectionReason::Duplicate => f.write_str("duplicate entry"),
            RejectionReason::Unreadable(e) => write!(f, "unreadable: {e}"),
            RejectionReason::BadChannels(c) => write!(f, "expected 1 or 3 channels, found {c}"),
            RejectionReason::DimensionMismatch { expected, found } => {
                write!(f, "expected {expected}x{expected} pixels, found shape {found:?}")
            }
            RejectionReason::NonFinite(i) => write!(f, "non-finite value at element {i}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Rejection {
    pub shard: usize,
    pub sample: usize,
    pub file: String,
    pub reason: RejectionReason,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ImportReport {
    pub rejections: Vec<Rejection>,
    /// Dataset samples without an accepted heatmap.
    pub missing: Vec<(usize, usize)>,
}

fn tensor_to_planes(t: Tensor, size: usize) -> Result<Planes<f32>, RejectionReason> {
    let (c, h, w) = match t.dims[..] {
        [h, w] => (1, h, w),
        [c, h, w] => (c, h, w),
        _ => {
            return Err(RejectionReason::DimensionMismatch {
                expected: size,
                found: t.dims,
            })
        }
    };
    if (h, w) != (size, size) {
        return Err(RejectionReason::DimensionMismatch {
            expected: size,
            found: t.dims,
        });
    }
    if c != 1 && c != 3 {
        return Err(RejectionReason::BadChannels(c));
    }
    if let Some(i) = t.data.iter().position(|v| !v.is_finite()) {
        return Err(RejectionReason::NonFinite(i));
    }
    Ok(Planes::from_vec(c, h, w, t.data).expect("checked shape"))
}

/// Reads an archive directory and validates each entry against `index`.
///
/// Bad entries are collected in the report instead of aborting the import;
/// only an unreadable manifest is an error.
pub fn import_heatmaps(dir: &Path, index: &DatasetIndex) -> Result<(HeatmapArchive, ImportReport), DatasetError> {
    let path = dir.join(ARCHIVE_FILE);
    let text = fs::read_to_string(&path).map_err(|e| DatasetError::io(&path, e))?;
    let manifest: ArchiveManifest = serde_json::from_str(&text).map_err(|e| DatasetError::Corrupt {
        path: path.clone(),
        reason: e.to_string(),
    })?;
    if manifest.format != ARCHIVE_FORMAT {
        return Err(DatasetError::Corrupt {
            path,
            reason: format!("unsupported archive format '{}'", manifest.format),
        });
    }

    let mut report = ImportReport::default();
    let mut entries = Vec::new();
    let mut seen = BTreeSet::new();
    for e in &manifest.entries {
        let reject = |reason| Rejection {
            shard: e.shard,
            sample: e.sample,
            file: e.file.clone(),
            reason,
        };
        let Some((_, size)) = index.get(e.shard, e.sample) else {
            report.rejections.push(reject(RejectionReason::UnknownSample));
            continue;
        };
        if seen.contains(&(e.shard, e.sample)) {
            report.rejections.push(reject(RejectionReason::Duplicate));
            continue;
        }
        let planes = read_tensor(dir.join(&e.file))
            .map_err(|err| RejectionReason::Unreadable(err.to_string()))
            .and_then(|t| tensor_to_planes(t, size));
        match planes {
            Ok(heatmap) => {
                seen.insert((e.shard, e.sample));
                entries.push(HeatmapEntry {
                    shard: e.shard,
                    sample: e.sample,
                    predicted_class: e.predicted_class,
                    heatmap,
                });
            }
            Err(reason) => report.rejections.push(reject(reason)),
        }
    }
    report.missing = index.samples.keys().filter(|k| !seen.contains(k)).copied().collect();
    entries.sort_by_key(|e| (e.shard, e.sample));
    Ok((
        HeatmapArchive {
            method: manifest.method,
            role: manifest.role,
            entries,
        },
        report,
    ))
}

/// Writes one heatmap as a rank-3 `(C, H, W)` tensor.
pub fn export_heatmap(path: &Path, heatmap: &Planes<f32>) -> Result<(), DatasetError> {
    let t = Tensor::new(
        vec![heatmap.channels(), heatmap.height(), heatmap.width()],
        heatmap.as_slice().to_vec(),
    )
    .expect("planes shape");
    write_tensor(path, &t).map_err(|e| DatasetError::io(path, e))
}

/// Writes a complete archive (tensors plus manifest) under `dir`.
pub fn export_archive(dir: &Path, archive: &HeatmapArchive) -> Result<(), DatasetError> {
    fs::create_dir_all(dir).map_err(|e| DatasetError::io(dir, e))?;
    let mut entries = Vec::with_capacity(archive.entries.len());
    for e in &archive.entries {
        let file = format!("shard_{}_sample_{:04}.fbt", e.shard, e.sample);
        export_heatmap(&dir.join(&file), &e.heatmap)?;
        entries.push(ArchiveEntry {
            shard: e.shard,
            sample: e.sample,
            file,
            predicted_class: e.predicted_class,
        });
    }
    let manifest = ArchiveManifest {
        format: ARCHIVE_FORMAT.to_string(),
        method: archive.method.clone(),
        role: archive.role,
        entries,
    };
    let path = dir.join(ARCHIVE_FILE);
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(&path, json + "\n").map_err(|e| DatasetError::io(&path, e))
}
