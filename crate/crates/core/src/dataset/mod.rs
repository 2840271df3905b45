//! Sharded datasets on disk and candidate-heatmap archives.
//!
//! Layout: `<root>/<role>/shard_<k>/` holding `manifest.json`, one PNG per
//! sample image and one `FBT1` tensor per ground truth. Heatmap archives are
//! a `heatmaps.json` manifest next to one `FBT1` tensor per entry.

mod archive;
mod shard;
pub mod tensor;

use std::io;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cellgen::GeometryError;

pub use archive::{
    export_archive, export_heatmap, import_heatmaps, ArchiveEntry, ArchiveManifest, DatasetIndex,
    HeatmapArchive, HeatmapEntry, ImportReport, Rejection, RejectionReason, ARCHIVE_FILE,
};
pub use shard::{
    generate_shard, plan_shard, read_shard, read_shard_manifest, shard_dir, write_shard, Shard,
    ShardEntry, ShardManifest, MANIFEST_FILE,
};

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}: bad magic bytes")]
    BadMagic { path: PathBuf },
    #[error("{path}: corrupt file: {reason}")]
    Corrupt { path: PathBuf, reason: String },
    #[error("{path}: dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        path: PathBuf,
        expected: Vec<usize>,
        found: Vec<usize>,
    },
    #[error("shard index {index} out of range for {count} shards")]
    InvalidIndex { index: usize, count: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

impl DatasetError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        DatasetError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn from_tensor(path: impl Into<PathBuf>, err: tensor::TensorError) -> Self {
        let path = path.into();
        match err {
            tensor::TensorError::BadMagic(_) => DatasetError::BadMagic { path },
            tensor::TensorError::Io(source) => DatasetError::Io { path, source },
            other => DatasetError::Corrupt {
                path,
                reason: other.to_string(),
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Train,
    Validation,
    Evaluation,
}

impl Role {
    pub const ALL: [Role; 3] = [Role::Train, Role::Validation, Role::Evaluation];

    pub fn dir_name(self) -> &'static str {
        match self {
            Role::Train => "train",
            Role::Validation => "validation",
            Role::Evaluation => "evaluation",
        }
    }

    /// Default shard count: 32 / 8 / 8.
    pub fn default_shards(self) -> usize {
        match self {
            Role::Train => 32,
            Role::Validation | Role::Evaluation => 8,
        }
    }

    fn seed_tag(self) -> u64 {
        self as u64 + 1
    }
}

impl std::fmt::Display for Role {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.dir_name())
    }
}

impl std::str::FromStr for Role {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "train" => Ok(Role::Train),
            "validation" => Ok(Role::Validation),
            "evaluation" => Ok(Role::Evaluation),
            _ => Err(format!("unknown role '{s}'")),
        }
    }
}

pub const DEFAULT_SAMPLES_PER_SHARD: usize = 200;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShardSpec {
    pub role: Role,
    pub shard_count: usize,
    pub samples_per_shard: usize,
    pub seed: u64,
    pub image_size: usize,
}

impl ShardSpec {
    /// Defaults for `role`: 32/8/8 shards of 200 samples, 224×224 images.
    pub fn new(role: Role, seed: u64) -> Self {
        Self {
            role,
            shard_count: role.default_shards(),
            samples_per_shard: DEFAULT_SAMPLES_PER_SHARD,
            seed,
            image_size: 224,
        }
    }

    pub fn total_samples(&self) -> usize {
        self.shard_count * self.samples_per_shard
    }
}
