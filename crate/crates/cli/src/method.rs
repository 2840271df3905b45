//! Method tags as they appear in score CSVs, and where their heatmaps come from.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use cellbench::dataset::{import_heatmaps, DatasetIndex, Role};
use cellbench::scoring::{Clamp, CountingMode, FamilyKind, Pipeline, ThresholdFamily};
use cellbench::seed::{derive_seed, tag_hash};
use cellbench::synthgen::{mock_heatmap, MockMethod};
use cellbench::{Grid, Planes};

use crate::args::ScoringArgs;
use crate::error::{CliError, Result};

const ABS_SUFFIX: &str = ":abs";
const STRICT_SUFFIX: &str = ":strict";

/// A scored method: the base tag plus the pipeline options that change its
/// scores. Options are encoded as tag suffixes, e.g. `mock:sign_flipped:abs`.
#[derive(Clone, Debug, PartialEq)]
pub struct MethodSpec {
    pub base: String,
    pub abs: bool,
    pub strict: bool,
    /// Only set for non-default clamp bounds.
    pub clamp: Option<(f64, f64)>,
}

impl MethodSpec {
    pub fn tag(&self) -> String {
        let mut tag = self.base.clone();
        if let Some((lo, hi)) = self.clamp {
            tag.push_str(&format!(":clamp({lo}/{hi})"));
        }
        if self.strict {
            tag.push_str(STRICT_SUFFIX);
        }
        if self.abs {
            tag.push_str(ABS_SUFFIX);
        }
        tag
    }

    pub fn parse(tag: &str) -> Self {
        let mut rest = tag;
        let abs = strip(&mut rest, ABS_SUFFIX);
        let strict = strip(&mut rest, STRICT_SUFFIX);
        let mut clamp = None;
        if let Some(open) = rest.rfind(":clamp(") {
            let bounds = rest[open + 7..].strip_suffix(')').and_then(|b| b.split_once('/'));
            if let Some((lo, hi)) = bounds.and_then(|(lo, hi)| Some((lo.parse().ok()?, hi.parse().ok()?))) {
                clamp = Some((lo, hi));
                rest = &rest[..open];
            }
        }
        Self {
            base: rest.to_string(),
            abs,
            strict,
            clamp,
        }
    }

    pub fn is_mock(&self) -> bool {
        self.base.starts_with("mock:")
    }

    /// The pipeline these scores come from, for the given family.
    pub fn pipeline(&self, kind: FamilyKind) -> Result<Pipeline<f64>> {
        let clamp = match kind {
            FamilyKind::Standard => None,
            FamilyKind::Clamped => Some(match self.clamp {
                Some((lo, hi)) => Clamp::new(lo, hi).map_err(|e| CliError::Usage(e.to_string()))?,
                None => Clamp::default_bounds(),
            }),
        };
        Ok(Pipeline {
            family: ThresholdFamily::of_kind(kind),
            clamp,
            abs: self.abs,
            mode: if self.strict {
                CountingMode::StrictLiteral
            } else {
                CountingMode::Disambiguated
            },
        })
    }
}

fn strip(rest: &mut &str, suffix: &str) -> bool {
    match rest.strip_suffix(suffix) {
        Some(r) => {
            *rest = r;
            true
        }
        None => false,
    }
}

/// Family and method options selected on the command line.
pub fn family_and_spec(args: &ScoringArgs, base: &str) -> Result<(FamilyKind, MethodSpec)> {
    let kind = match (&args.clamp, args.family) {
        (Some(_), Some(crate::args::FamilyArg::Standard)) => {
            return Err(CliError::Usage("--clamp requires the clamped family".into()))
        }
        (Some(_), _) => FamilyKind::Clamped,
        (None, f) => f.map(FamilyKind::from).unwrap_or(FamilyKind::Standard),
    };
    let clamp = match args.clamp.as_deref() {
        Some(&[lo, hi]) => {
            Clamp::new(lo, hi).map_err(|e| CliError::Usage(e.to_string()))?;
            let default = Clamp::<f64>::default_bounds();
            (lo != default.lo() || hi != default.hi()).then_some((lo, hi))
        }
        Some(_) => return Err(CliError::Usage("--clamp takes two values".into())),
        None => None,
    };
    let spec = MethodSpec {
        base: base.to_string(),
        abs: args.abs,
        strict: args.strict,
        clamp,
    };
    if spec.is_mock() {
        spec.mock()?;
    } else {
        check_archive_name(base)?;
    }
    Ok((kind, spec))
}

fn check_archive_name(name: &str) -> Result<()> {
    let ok = !name.is_empty()
        && !name.starts_with('.')
        && name.chars().all(|c| c.is_ascii_alphanumeric() || "_-.".contains(c));
    if ok {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "method '{name}' is neither a mock tag nor a valid archive name"
        )))
    }
}

impl MethodSpec {
    pub fn mock(&self) -> Result<MockMethod> {
        self.base
            .parse()
            .map_err(|e: cellbench::synthgen::MockError| CliError::Usage(e.to_string()))
    }
}

/// Seed of the mock heatmap for one sample. Shared by `score` and
/// `export-mock` so exported archives score identically.
pub fn mock_seed(seed: u64, mock: &MockMethod, role: Role, shard: usize, sample: usize) -> u64 {
    derive_seed(
        seed,
        &[tag_hash(&mock.tag()), tag_hash(role.dir_name()), shard as u64, sample as u64],
    )
}

pub fn heatmaps_dir(root: &Path, explicit: Option<&PathBuf>) -> PathBuf {
    explicit.cloned().unwrap_or_else(|| root.join("heatmaps"))
}

/// Candidate heatmaps of one method.
pub enum Source {
    Mock { mock: MockMethod, seed: u64, role: Role },
    Archive(BTreeMap<(usize, usize), (Planes<f32>, Option<u8>)>),
}

/// Archive samples that could not be used, with the reason.
pub type Skipped = Vec<(usize, usize, String)>;

impl Source {
    pub fn open(spec: &MethodSpec, seed: u64, role: Role, heatmaps: &Path, index: &DatasetIndex) -> Result<(Self, Skipped)> {
        if spec.is_mock() {
            return Ok((
                Source::Mock {
                    mock: spec.mock()?,
                    seed,
                    role,
                },
                Vec::new(),
            ));
        }
        let dir = heatmaps.join(&spec.base);
        if !dir.is_dir() {
            return Err(CliError::Missing(format!(
                "no heatmap archive for method '{}' at {}",
                spec.base,
                dir.display()
            )));
        }
        let (archive, report) = import_heatmaps(&dir, index)?;
        if archive.role != role {
            return Err(CliError::Data(format!(
                "archive {} holds {} heatmaps, expected {}",
                dir.display(),
                archive.role,
                role
            )));
        }
        let mut skipped: Skipped = report
            .rejections
            .into_iter()
            .map(|r| (r.shard, r.sample, format!("{}: {}", r.file, r.reason)))
            .collect();
        let rejected: std::collections::BTreeSet<_> = skipped.iter().map(|r| (r.0, r.1)).collect();
        skipped.extend(
            report
                .missing
                .into_iter()
                .filter(|key| !rejected.contains(key))
                .map(|(s, k)| (s, k, "no heatmap".to_string())),
        );
        let map = archive
            .entries
            .into_iter()
            .map(|e| ((e.shard, e.sample), (e.heatmap, e.predicted_class)))
            .collect();
        Ok((Source::Archive(map), skipped))
    }

    /// Candidate for one sample and its predicted class, or `None` if the
    /// archive has no usable heatmap for it.
    pub fn candidate(&self, shard: usize, sample: usize, h0: &Grid<f64>) -> Option<(Planes<f64>, Option<u8>)> {
        match self {
            Source::Mock { mock, seed, role } => Some((
                mock_heatmap(mock, h0, mock_seed(*seed, mock, *role, shard, sample)),
                None,
            )),
            Source::Archive(map) => map.get(&(shard, sample)).map(|(h, p)| (h.map(|&v| f64::from(v)), *p)),
        }
    }
}
