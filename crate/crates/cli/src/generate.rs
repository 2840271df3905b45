use std::fs;

use cellbench::dataset::{generate_shard, shard_dir, write_shard, Role, ShardSpec};
use cellbench::CellClass;
use serde_json::json;

use crate::args::GenerateArgs;
use crate::error::{CliError, Result};

pub const SUMMARY_FILE: &str = "dataset.json";
const MIN_SIZE: usize = 32;

pub fn run(args: &GenerateArgs) -> Result<()> {
    if args.size < MIN_SIZE {
        return Err(CliError::Usage(format!("--size must be at least {MIN_SIZE}")));
    }
    if args.samples_per_shard == 0 {
        return Err(CliError::Usage("--samples-per-shard must be positive".into()));
    }
    let root = &args.common.root;
    fs::create_dir_all(root).map_err(|e| CliError::io(root, e))?;

    let mut roles = serde_json::Map::new();
    for (role, shard_count) in [
        (Role::Train, args.train_shards),
        (Role::Validation, args.validation_shards),
        (Role::Evaluation, args.evaluation_shards),
    ] {
        let spec = ShardSpec {
            role,
            shard_count,
            samples_per_shard: args.samples_per_shard,
            seed: args.common.seed,
            image_size: args.size,
        };
        let stale = shard_dir(root, role, shard_count);
        if stale.exists() {
            log::warn!("{} exists but is beyond the requested shard count", stale.display());
        }
        let mut classes = [0usize; CellClass::ALL.len()];
        let mut backgrounds = [0usize; 3];
        for k in 0..shard_count {
            let shard = generate_shard(&spec, k)?;
            write_shard(&shard, &shard_dir(root, role, k))?;
            for s in &shard.samples {
                classes[s.label.id() as usize] += 1;
                backgrounds[s.background.id() as usize - 1] += 1;
            }
            log::info!("{role}: shard {}/{shard_count} written", k + 1);
        }
        roles.insert(
            role.dir_name().into(),
            json!({
                "shards": shard_count,
                "samples": spec.total_samples(),
                "class_counts": classes,
                "background_counts": backgrounds,
            }),
        );
    }

    let summary = json!({
        "format": "cellbench-dataset/1",
        "seed": args.common.seed,
        "image_size": args.size,
        "samples_per_shard": args.samples_per_shard,
        "roles": roles,
    });
    let text = serde_json::to_string_pretty(&summary).expect("json") + "\n";
    let path = root.join(SUMMARY_FILE);
    fs::write(&path, &text).map_err(|e| CliError::io(&path, e))?;
    print!("{text}");
    Ok(())
}
