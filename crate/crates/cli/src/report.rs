use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use cellbench::dataset::{read_shard, shard_dir, DatasetIndex, Role};
use cellbench::scoring::{aggregate, roc_curves, FamilyKind, ScoreRecord, ThresholdFamily};

use crate::args::ReportArgs;
use crate::csvio::{self, ScatterRow};
use crate::error::{CliError, Result};
use crate::method::{heatmaps_dir, MethodSpec, Source};
use crate::render;

pub const SCATTER_FILE: &str = "scatter.csv";

pub fn run(args: &ReportArgs) -> Result<()> {
    let mut families = Vec::new();
    for kind in [FamilyKind::Standard, FamilyKind::Clamped] {
        let path = args.out.join(csvio::detail_name(kind));
        if path.exists() {
            families.push((kind, csvio::read_detail(&path)?));
        }
    }
    if families.is_empty() {
        return Err(CliError::Missing(format!("no score CSVs in {}", args.out.display())));
    }

    let mut scatter = Vec::new();
    for (kind, records) in &families {
        let family = ThresholdFamily::of_kind(*kind);
        let agg = aggregate(records)?;
        let variants: &[&'static str] = match kind {
            FamilyKind::Standard => &["avg", "best"],
            FamilyKind::Clamped => &["clamped_best"],
        };
        for &variant in variants {
            for m in &agg.methods {
                let t = if variant == "avg" { &m.avg } else { &m.best };
                scatter.push(ScatterRow {
                    variant,
                    method: m.method.clone(),
                    precision: t.precision.mean,
                    recall: t.recall.mean,
                    std_precision: t.precision.std,
                    std_recall: t.recall.std,
                });
            }
        }
        let roc = roc_curves(records, &family)?;
        let path = args.out.join(csvio::roc_name(*kind));
        csvio::write_roc(&path, &roc)?;
        println!("{}", path.display());
    }
    let path = args.out.join(SCATTER_FILE);
    csvio::write_scatter(&path, &scatter)?;
    println!("{}", path.display());

    if !args.no_gallery {
        for (kind, records) in &families {
            for path in gallery(args, *kind, records)? {
                println!("{}", path.display());
            }
        }
    }
    Ok(())
}

fn file_stem(tag: &str) -> String {
    tag.chars().map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '-' { c } else { '_' }).collect()
}

/// One PNG per method, rows = first sample of each class in the gallery shard.
fn gallery(args: &ReportArgs, kind: FamilyKind, records: &[ScoreRecord<f64>]) -> Result<Vec<PathBuf>> {
    let root = &args.common.root;
    let role = Role::from(args.role);
    let dir = shard_dir(root, role, args.gallery_shard);
    if !dir.is_dir() {
        return Err(CliError::Missing(format!(
            "gallery shard {} (use --no-gallery to skip)",
            dir.display()
        )));
    }
    let shard = read_shard(&dir)?;
    let mut picks = BTreeMap::new();
    for (sample, entry) in shard.samples.iter().zip(&shard.manifest.samples) {
        picks.entry(sample.label.id()).or_insert((entry.index, sample));
    }

    let index = DatasetIndex::load(root, role)?;
    let heatmaps = heatmaps_dir(root, args.heatmaps.as_ref());
    let out_dir = args.out.join("gallery").join(kind.to_string());
    fs::create_dir_all(&out_dir).map_err(|e| CliError::io(&out_dir, e))?;

    let mut tags: Vec<&str> = records.iter().map(|r| r.key.method.as_str()).collect();
    tags.dedup();
    let mut written = Vec::new();
    for tag in tags {
        let spec = MethodSpec::parse(tag);
        let pipeline = spec.pipeline(kind)?;
        let source = match Source::open(&spec, args.common.seed, role, &heatmaps, &index) {
            Ok((source, _)) => source,
            Err(CliError::Missing(what)) => {
                log::warn!("gallery for {tag} skipped: {what}");
                continue;
            }
            Err(e) => return Err(e),
        };
        let mut rows = Vec::new();
        for &(k, sample) in picks.values() {
            let h0 = sample.ground_truth.map(|&v| f64::from(v));
            match source.candidate(args.gallery_shard, k, &h0) {
                Some((candidate, _)) => rows.push(render::sample_row(&sample.image, &h0, &candidate, &pipeline)?),
                None => log::warn!("gallery for {tag}: no heatmap for sample {k}"),
            }
        }
        if rows.is_empty() {
            continue;
        }
        let path = out_dir.join(format!("{}.png", file_stem(tag)));
        save(&render::compose(&rows), &path)?;
        written.push(path);
    }
    Ok(written)
}

fn save(img: &image::RgbImage, path: &Path) -> Result<()> {
    img.save_with_format(path, image::ImageFormat::Png).map_err(|e| match e {
        image::ImageError::IoError(io) => CliError::io(path, io),
        other => CliError::Internal(format!("{}: {other}", path.display())),
    })
}
