//! Simulate, detect and score through the library API.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use streakbench_core::dataset::{
    make_folds, read_pgm, DatasetManifest, ManifestEntry, Source, SplitsDocument,
};
use streakbench_core::detector::{detect_streaks, DetectorParams};
use streakbench_core::evaluation::{ap_report, default_thresholds, BBox, DetectorMeta, ImageEval};
use streakbench_core::simulate::Simulator;

#[test]
fn easy_frames_are_found() {
    let cfg = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs/easy.toml");
    let sim = Simulator::from_config_file(&cfg).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let manifest = sim.write_dataset(12, 99, dir.path()).unwrap();
    assert_eq!(manifest.entries.len(), 12);
    let annotations = manifest.load_annotations(dir.path()).unwrap();

    let params = DetectorParams::default();
    let mut images = BTreeMap::new();
    for (entry, ann) in manifest.entries.iter().zip(&annotations) {
        let img = read_pgm(&dir.path().join(&entry.image_path)).unwrap();
        assert_eq!((img.width, img.height), (entry.width, entry.height));
        assert_eq!(ann.objects.len(), 1);
        let gts = ann
            .objects
            .iter()
            .map(|o| BBox::new(o.x as f64, o.y as f64, o.w as f64, o.h as f64))
            .collect();
        images.insert(
            entry.image_path.clone(),
            ImageEval {
                detections: detect_streaks(&img, &params),
                ground_truth: gts,
            },
        );
    }
    let report = ap_report(&images, &default_thresholds(), &DetectorMeta::default()).unwrap();
    assert!(report.ap_03 >= 0.9, "{report:?}");

    // The same seed reproduces the same files.
    let again = tempfile::tempdir().unwrap();
    sim.write_dataset(12, 99, again.path()).unwrap();
    for e in &manifest.entries {
        let a = std::fs::read(dir.path().join(&e.image_path)).unwrap();
        let b = std::fs::read(again.path().join(&e.image_path)).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn synthetic_images_never_reach_test_folds() {
    let mut manifest = DatasetManifest::new(0);
    for i in 0..83 {
        let source = if i < 63 {
            Source::Real
        } else {
            Source::Synthetic
        };
        manifest.entries.push(ManifestEntry {
            image_path: format!("images/{i:03}.pgm"),
            annotation_path: format!("annotations/{i:03}.json"),
            source,
            width: 16,
            height: 16,
        });
    }
    let split = make_folds(&manifest, 5, 4).unwrap();
    let mut sizes = split.fold_sizes();
    sizes.sort_unstable();
    assert_eq!(sizes, vec![12, 12, 13, 13, 13]);
    let doc = SplitsDocument::build(&manifest, split, Some(10)).unwrap();
    let synthetic: BTreeSet<&str> = manifest.paths_of(Source::Synthetic).into_iter().collect();
    let mut seen = BTreeSet::new();
    for round in &doc.rounds {
        assert!(round.test.iter().all(|p| !synthetic.contains(p.as_str())));
        assert_eq!(round.train.len(), 63 - round.test.len() + 10);
        for p in &round.test {
            assert!(seen.insert(p.clone()), "{p} tested twice");
        }
    }
    assert_eq!(seen.len(), 63);
}
