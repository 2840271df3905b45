use cellbench::dataset::{export_archive, read_shard, shard_dir, HeatmapArchive, HeatmapEntry, Role};
use cellbench::synthgen::mock_heatmap;
use rayon::prelude::*;

use crate::args::ExportMockArgs;
use crate::error::{CliError, Result};
use crate::method::{mock_seed, MethodSpec};
use crate::score::shard_count;

pub fn run(args: &ExportMockArgs) -> Result<()> {
    let spec = MethodSpec::parse(&args.method);
    if !spec.is_mock() || spec.abs || spec.strict || spec.clamp.is_some() {
        return Err(CliError::Usage(format!("'{}' is not a plain mock tag", args.method)));
    }
    let mock = spec.mock()?;
    let root = &args.common.root;
    let role = Role::from(args.role);
    let mut shards = shard_count(root, role);
    if shards == 0 {
        return Err(CliError::Missing(format!("no {role} shards under {}", root.display())));
    }
    if let Some(max) = args.max_shards {
        shards = shards.min(max);
    }

    let mut entries = Vec::new();
    for k in 0..shards {
        let shard = read_shard(&shard_dir(root, role, k))?;
        entries.par_extend(shard.samples.par_iter().zip(&shard.manifest.samples).map(|(s, e)| HeatmapEntry {
            shard: k,
            sample: e.index,
            predicted_class: Some(s.label.id()),
            heatmap: mock_heatmap(&mock, &s.ground_truth, mock_seed(args.common.seed, &mock, role, k, e.index)),
        }));
    }
    let n = entries.len();
    let archive = HeatmapArchive {
        method: args.name.clone().unwrap_or_else(|| mock.tag()),
        role,
        entries,
    };
    export_archive(&args.out, &archive)?;
    println!("{n} heatmaps written to {}", args.out.display());
    Ok(())
}
