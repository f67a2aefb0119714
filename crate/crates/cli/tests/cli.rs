//! Drives the `streakbench` binary end to end.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use streakbench_core::dataset::{AnnotationFile, DatasetManifest, Source, SplitsDocument};
use streakbench_core::evaluation::{
    BBox, Detection, DetectionFile, DetectorMeta, ImageDetections, MetricsReport,
};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_streakbench"))
        .args(args)
        .output()
        .unwrap()
}

fn config(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn ok(out: &Output) -> String {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn simulate(dir: &Path, count: &str, seed: &str) -> PathBuf {
    ok(&bin(&[
        "simulate",
        "--config",
        &config("easy.toml"),
        "--count",
        count,
        "--seed",
        seed,
        "--out",
        s(dir),
    ]));
    dir.join("manifest.json")
}

#[test]
fn exit_codes() {
    assert_eq!(bin(&[]).status.code(), Some(1));
    assert_eq!(bin(&["simulate", "--count", "x"]).status.code(), Some(1));
    assert_eq!(bin(&["--help"]).status.code(), Some(0));
    assert_eq!(
        bin(&["validate-config", "--config", "/nonexistent/scene.toml"])
            .status
            .code(),
        Some(2)
    );
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "[optics]\nn_x = 0\n").unwrap();
    assert_eq!(
        bin(&["validate-config", "--config", s(&bad)]).status.code(),
        Some(2)
    );
}

#[test]
fn validate_config_prints_field_of_view() {
    let text = ok(&bin(&[
        "validate-config",
        "--config",
        &config("swarm.toml"),
    ]));
    assert!(text.contains("FOV: 18.386 deg x 13.739 deg"), "{text}");
    let fx = 2.0 * (752.0f64 * 8.6 / 39960.0).atan();
    let fy = 2.0 * (580.0f64 * 8.3 / 39960.0).atan();
    assert!(
        text.contains(&format!("FOV (rad): {fx:.12} x {fy:.12}")),
        "{text}"
    );
}

#[test]
fn ground_truth_as_detections_scores_one() {
    let dir = tempfile::tempdir().unwrap();
    let manifest_path = simulate(dir.path(), "4", "3");
    let manifest = DatasetManifest::load(&manifest_path).unwrap();
    let images = manifest
        .entries
        .iter()
        .map(|e| {
            let ann = AnnotationFile::load(&dir.path().join(&e.annotation_path)).unwrap();
            let detections = ann
                .objects
                .iter()
                .map(|o| {
                    Detection::new(
                        BBox::new(o.x as f64, o.y as f64, o.w as f64, o.h as f64),
                        1.0,
                    )
                })
                .collect();
            ImageDetections {
                image: e.image_path.clone(),
                detections,
            }
        })
        .collect();
    let meta = DetectorMeta {
        detector: "oracle".into(),
        gflops: Some(1.5),
        params_millions: None,
        time_ms: None,
    };
    let det = dir.path().join("gt_dets.json");
    DetectionFile { meta, images }.save(&det).unwrap();
    let report_path = dir.path().join("report.json");
    let text = ok(&bin(&[
        "evaluate",
        "--gt",
        s(&manifest_path),
        "--det",
        s(&det),
        "--out",
        s(&report_path),
    ]));
    assert!(text.contains("oracle"));
    let r = MetricsReport::load(&report_path).unwrap();
    assert_eq!((r.ap_range, r.ap_03, r.ap_05), (1.0, 1.0, 1.0));
    assert_eq!(r.per_threshold.len(), 14);
    assert_eq!(r.gflops, Some(1.5));
}

#[test]
fn detect_then_report_table() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = simulate(dir.path(), "5", "11");
    let det = dir.path().join("dets.json");
    ok(&bin(&[
        "detect",
        "--images",
        s(&manifest),
        "--out",
        s(&det),
    ]));
    let file = DetectionFile::load(&det).unwrap();
    assert_eq!(file.meta.detector, "baseline");
    assert_eq!(file.meta.time_ms, None);
    assert_eq!(file.images.len(), 5);

    // A directory of images produces the same detections keyed by file name.
    let det_dir = dir.path().join("dets_dir.json");
    ok(&bin(&[
        "detect",
        "--images",
        s(&dir.path().join("images")),
        "--out",
        s(&det_dir),
    ]));
    let by_dir = DetectionFile::load(&det_dir).unwrap();
    for (a, b) in file.images.iter().zip(&by_dir.images) {
        assert!(a.image.ends_with(&b.image));
        assert_eq!(a.detections, b.detections);
    }

    let r1 = dir.path().join("r1.json");
    ok(&bin(&[
        "evaluate",
        "--gt",
        s(&manifest),
        "--det",
        s(&det_dir),
        "--out",
        s(&r1),
    ]));
    let table = ok(&bin(&["report", "--inputs", s(&r1), s(&r1), "--table"]));
    let header = table.lines().next().unwrap();
    for col in [
        "Method",
        "AP@[0.3:0.95]",
        "AP@0.3",
        "AP@0.5",
        "GFLOPs",
        "Params (millions)",
        "Time (ms)",
    ] {
        assert!(header.contains(col), "{header}");
    }
    assert!(table.contains("baseline"));
    let json = ok(&bin(&["report", "--inputs", s(&r1)]));
    let parsed: Vec<MetricsReport> = serde_json::from_str(&json).unwrap();
    assert_eq!(parsed.len(), 1);
}

#[test]
fn ingest_split_and_fold_evaluation() {
    let dir = tempfile::tempdir().unwrap();
    let real_dir = dir.path().join("real");
    let synth_dir = dir.path().join("synth");
    simulate(&real_dir, "6", "1");
    let synth_manifest = simulate(&synth_dir, "3", "2");

    let merged = dir.path().join("all.json");
    ok(&bin(&[
        "ingest",
        "--images",
        s(&real_dir.join("images")),
        "--annotations",
        s(&real_dir.join("annotations")),
        "--source",
        "real",
        "--merge",
        s(&synth_manifest),
        "--out",
        s(&merged),
    ]));
    let m = DatasetManifest::load(&merged).unwrap();
    assert_eq!(m.paths_of(Source::Real).len(), 6);
    assert_eq!(m.paths_of(Source::Synthetic).len(), 3);

    let splits = dir.path().join("splits.json");
    ok(&bin(&[
        "split",
        "--manifest",
        s(&merged),
        "--folds",
        "3",
        "--seed",
        "5",
        "--out",
        s(&splits),
    ]));
    let doc = SplitsDocument::load(&splits).unwrap();
    assert_eq!(doc.split.fold_sizes(), vec![2, 2, 2]);
    let synthetic = m.paths_of(Source::Synthetic);
    for r in &doc.rounds {
        assert!(r.test.iter().all(|p| !synthetic.contains(&p.as_str())));
        assert_eq!(r.train.len(), 4 + 3);
    }

    let det = dir.path().join("dets.json");
    ok(&bin(&["detect", "--images", s(&merged), "--out", s(&det)]));
    let out = dir.path().join("fold1.json");
    ok(&bin(&[
        "evaluate",
        "--gt",
        s(&merged),
        "--det",
        s(&det),
        "--split",
        s(&splits),
        "--fold",
        "1",
        "--out",
        s(&out),
    ]));
    let r = MetricsReport::load(&out).unwrap();
    assert_eq!((r.fold, r.images), (Some(1), 2));

    assert_eq!(
        bin(&[
            "split",
            "--manifest",
            s(&merged),
            "--folds",
            "7",
            "--seed",
            "5",
            "--out",
            s(&splits)
        ])
        .status
        .code(),
        Some(2)
    );
}
