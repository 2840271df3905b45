use std::fs;

use cellbench::dataset::tensor::{read_tensor, write_tensor, Tensor};
use cellbench::dataset::{
    export_archive, generate_shard, import_heatmaps, read_shard, shard_dir, write_shard, DatasetError, DatasetIndex,
    HeatmapArchive, HeatmapEntry, RejectionReason, Role, ShardSpec,
};
use cellbench::Planes;

fn spec() -> ShardSpec {
    ShardSpec {
        role: Role::Validation,
        shard_count: 2,
        samples_per_shard: 10,
        seed: 17,
        image_size: 64,
    }
}

#[test]
fn images_within_quantization_and_ground_truth_exact() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = spec();
    let shard = generate_shard(&spec, 1).unwrap();
    let dir = shard_dir(tmp.path(), spec.role, 1);
    write_shard(&shard, &dir).unwrap();
    let back = read_shard(&dir).unwrap();

    assert_eq!(back.manifest, shard.manifest);
    for (a, b) in shard.samples.iter().zip(&back.samples) {
        assert_eq!(a.label, b.label);
        assert_eq!(a.background, b.background);
        assert_eq!(a.ground_truth, b.ground_truth);
        for (pa, pb) in a.image.iter().zip(b.image.iter()) {
            for c in 0..3 {
                assert!((pa[c] - pb[c]).abs() <= 0.5 / 255.0 + 1e-6);
            }
        }
    }
}

#[test]
fn generation_independent_of_thread_count() {
    let spec = spec();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| generate_shard(&spec, 0).unwrap())
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn damaged_files_are_reported_distinctly() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = spec();
    let dir = shard_dir(tmp.path(), spec.role, 0);
    write_shard(&generate_shard(&spec, 0).unwrap(), &dir).unwrap();
    let gt = dir.join("sample_0003_gt.fbt");
    let bytes = fs::read(&gt).unwrap();

    fs::write(&gt, &bytes[..bytes.len() - 7]).unwrap();
    assert!(matches!(read_shard(&dir), Err(DatasetError::Corrupt { .. })));

    let mut bad = bytes.clone();
    bad[0] = b'X';
    fs::write(&gt, &bad).unwrap();
    assert!(matches!(read_shard(&dir), Err(DatasetError::BadMagic { .. })));

    write_tensor(&gt, &Tensor::new(vec![8, 8], vec![0.0; 64]).unwrap()).unwrap();
    assert!(matches!(
        read_shard(&dir),
        Err(DatasetError::DimensionMismatch { .. })
    ));

    fs::remove_file(&gt).unwrap();
    assert!(matches!(read_shard(&dir), Err(DatasetError::Io { .. })));
}

#[test]
fn heatmap_archive_round_trip_and_rejections() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = spec();
    for k in 0..spec.shard_count {
        write_shard(&generate_shard(&spec, k).unwrap(), &shard_dir(tmp.path(), spec.role, k)).unwrap();
    }
    let index = DatasetIndex::load(tmp.path(), spec.role).unwrap();
    assert_eq!(index.len(), 20);

    let ok = Planes::filled(1, 64, 64, 0.25f32);
    let mut nan = Planes::filled(3, 64, 64, 0.0f32);
    nan.as_mut_slice()[5] = f32::NAN;
    let archive = HeatmapArchive {
        method: "test".into(),
        role: spec.role,
        entries: vec![
            HeatmapEntry { shard: 0, sample: 0, predicted_class: Some(3), heatmap: ok.clone() },
            HeatmapEntry { shard: 0, sample: 1, predicted_class: None, heatmap: nan },
            HeatmapEntry { shard: 0, sample: 2, predicted_class: None, heatmap: Planes::filled(2, 64, 64, 0.0) },
            HeatmapEntry { shard: 0, sample: 3, predicted_class: None, heatmap: Planes::filled(1, 32, 32, 0.0) },
            HeatmapEntry { shard: 5, sample: 0, predicted_class: None, heatmap: ok.clone() },
        ],
    };
    let dir = tmp.path().join("heatmaps");
    export_archive(&dir, &archive).unwrap();
    let t = read_tensor(dir.join("shard_0_sample_0000.fbt")).unwrap();
    assert_eq!(t.dims, vec![1, 64, 64]);

    let (back, report) = import_heatmaps(&dir, &index).unwrap();
    assert_eq!(back.entries.len(), 1);
    assert_eq!(back.entries[0].heatmap, ok);
    assert_eq!(back.entries[0].predicted_class, Some(3));
    let reasons: Vec<_> = report.rejections.iter().map(|r| r.reason.clone()).collect();
    assert_eq!(reasons.len(), 4);
    assert_eq!(reasons[0], RejectionReason::NonFinite(5));
    assert_eq!(reasons[1], RejectionReason::BadChannels(2));
    assert!(matches!(reasons[2], RejectionReason::DimensionMismatch { .. }));
    assert_eq!(reasons[3], RejectionReason::UnknownSample);
    assert_eq!(report.missing.len(), 19);
}
