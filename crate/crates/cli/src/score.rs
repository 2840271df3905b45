use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use cellbench::dataset::{read_shard, shard_dir, DatasetIndex, Role};
use cellbench::scoring::{aggregate, FamilyKind, Pipeline, SampleKey, ScoreRecord, ThresholdFamily};
use rayon::prelude::*;

use crate::args::ScoreArgs;
use crate::csvio::{self, fmt_g, quantize};
use crate::error::{CliError, Result};
use crate::method::{family_and_spec, heatmaps_dir, MethodSpec, Source};

pub const MISSING_FILE: &str = "missing.csv";

struct Method {
    spec: MethodSpec,
    tag: String,
    pipeline: Pipeline<f64>,
    source: Source,
}

/// Number of consecutive shards present for `role`.
pub fn shard_count(root: &Path, role: Role) -> usize {
    (0..).take_while(|&k| shard_dir(root, role, k).is_dir()).count()
}

pub fn run(args: &ScoreArgs) -> Result<()> {
    let root = &args.common.root;
    let role = Role::from(args.role);

    let mut kind = None;
    let mut specs = Vec::new();
    for base in &args.methods {
        let (k, spec) = family_and_spec(&args.scoring, base)?;
        kind = Some(k);
        specs.push(spec);
    }
    let kind = kind.expect("clap requires --method");
    let tags: BTreeSet<String> = specs.iter().map(MethodSpec::tag).collect();
    if tags.len() != specs.len() {
        return Err(CliError::Usage("duplicate --method".into()));
    }

    let index = DatasetIndex::load(root, role)?;
    let mut shards = shard_count(root, role);
    if shards == 0 {
        return Err(CliError::Missing(format!(
            "no {role} shards under {}",
            root.display()
        )));
    }
    if let Some(max) = args.max_shards {
        shards = shards.min(max);
    }

    let heatmaps = heatmaps_dir(root, args.heatmaps.as_ref());
    let mut missing: Vec<(String, usize, usize, String)> = Vec::new();
    let mut methods = Vec::new();
    for spec in specs {
        let (source, skipped) = Source::open(&spec, args.common.seed, role, &heatmaps, &index)?;
        let tag = spec.tag();
        for (shard, sample, reason) in skipped.into_iter().filter(|s| s.0 < shards) {
            log::warn!("{tag}: shard {shard} sample {sample}: {reason}");
            missing.push((tag.clone(), shard, sample, reason));
        }
        methods.push(Method {
            pipeline: spec.pipeline(kind)?,
            spec,
            tag,
            source,
        });
    }

    let mut records: Vec<ScoreRecord<f64>> = Vec::new();
    for k in 0..shards {
        let shard = read_shard(&shard_dir(root, role, k))?;
        for method in &methods {
            let per_sample = shard
                .samples
                .par_iter()
                .zip(shard.manifest.samples.par_iter())
                .filter_map(|(sample, entry)| {
                    let h0 = sample.ground_truth.map(|&v| f64::from(v));
                    let (candidate, predicted) = method.source.candidate(k, entry.index, &h0)?;
                    let key = SampleKey {
                        method: method.tag.clone(),
                        shard: k,
                        sample: entry.index,
                        true_class: sample.label.id(),
                        predicted_class: predicted.unwrap_or(sample.label.id()),
                    };
                    Some(
                        method
                            .pipeline
                            .evaluate(&candidate, &h0)
                            .map(|points| ScoreRecord::from_sweep(&key, &points)),
                    )
                })
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| {
                    CliError::Data(format!("{} shard {k}: {e}", method.spec.base))
                })?;
            records.extend(per_sample.into_iter().flatten());
        }
        log::info!("{role}: shard {}/{shards} scored", k + 1);
    }
    for r in &mut records {
        let m = &mut r.metrics;
        for v in [&mut m.accuracy, &mut m.precision, &mut m.recall, &mut m.fpr] {
            *v = quantize(*v);
        }
    }
    if records.is_empty() {
        return Err(CliError::Missing("no heatmaps could be scored".into()));
    }

    fs::create_dir_all(&args.out).map_err(|e| CliError::io(&args.out, e))?;
    let all = merge(&args.out.join(csvio::detail_name(kind)), records, &tags)?;
    write_outputs(&args.out, kind, &all)?;
    write_missing(&args.out.join(MISSING_FILE), &missing)?;

    let agg = aggregate(&all)?;
    println!("family: {kind} ({} members)", ThresholdFamily::of_kind(kind).len());
    for m in agg.methods.iter().filter(|m| tags.contains(&m.method)) {
        println!(
            "{}: samples={} P_avg={} R_avg={} P_best={} R_best={}",
            m.method,
            m.samples,
            fmt_g(m.avg.precision.mean),
            fmt_g(m.avg.recall.mean),
            fmt_g(m.best.precision.mean),
            fmt_g(m.best.recall.mean)
        );
    }
    if !missing.is_empty() {
        println!("{} samples without a usable heatmap, see {}", missing.len(), MISSING_FILE);
    }
    Ok(())
}

/// Replaces the rows of the rescored methods in an existing detail CSV.
fn merge(path: &Path, new: Vec<ScoreRecord<f64>>, tags: &BTreeSet<String>) -> Result<Vec<ScoreRecord<f64>>> {
    let mut all = if path.exists() {
        let mut old = csvio::read_detail(path)?;
        old.retain(|r| !tags.contains(&r.key.method));
        old
    } else {
        Vec::new()
    };
    all.extend(new);
    all.sort_by(|a, b| a.key.cmp(&b.key).then(a.m.cmp(&b.m)));
    csvio::write_detail(path, &all)?;
    Ok(all)
}

fn write_outputs(out: &Path, kind: FamilyKind, all: &[ScoreRecord<f64>]) -> Result<()> {
    let agg = aggregate(all)?;
    csvio::write_aggregate(&out.join(csvio::aggregate_name(kind)), &agg.samples)?;
    csvio::write_summary(&out.join(csvio::summary_name(kind)), &agg.methods)
}

fn write_missing(path: &Path, missing: &[(String, usize, usize, String)]) -> Result<()> {
    let f = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut w = csv::Writer::from_writer(f);
    w.write_record(["method", "shard", "sample", "reason"])?;
    for (tag, shard, sample, reason) in missing {
        w.write_record([tag.as_str(), &shard.to_string(), &sample.to_string(), reason])?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}
