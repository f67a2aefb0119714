//! Command-line front-end: simulate, split, detect, evaluate, report.
//!
//! Exit codes: 0 success, 1 usage error, 2 data or format error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use streakbench_core::dataset::{
    make_folds, read_pgm, AnnotationFile, DatasetManifest, ManifestEntry, Source, SplitsDocument,
};
use streakbench_core::detector::{detect_streaks, DetectorParams};
use streakbench_core::evaluation::{
    ap_report, default_thresholds, render_table, BBox, DetectionFile, DetectorMeta,
    ImageDetections, ImageEval, MetricsReport,
};
use streakbench_core::sensor::fov_angles;
use streakbench_core::simulate::Simulator;
use streakbench_core::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "streakbench",
    version,
    about = "Star tracker RSO streak simulator and benchmark harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Render synthetic frames with annotations and a manifest.
    Simulate(SimulateArgs),
    /// Assign real images to cross-validation folds.
    Split(SplitArgs),
    /// Run the classical baseline detector.
    Detect(DetectArgs),
    /// Score a detection file against ground truth.
    Evaluate(EvaluateArgs),
    /// Tabulate evaluation reports, averaging folds per detector.
    Report(ReportArgs),
    /// Check a scene configuration and print the derived field of view.
    ValidateConfig(ValidateArgs),
    /// Build a manifest for existing images and annotations.
    Ingest(IngestArgs),
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    count: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Also write 8-bit PGM previews under `previews/`.
    #[arg(long)]
    preview: bool,
}

#[derive(Debug, Args)]
struct SplitArgs {
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long, default_value_t = 5)]
    folds: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Synthetic images added to each training set (default: all).
    #[arg(long)]
    synthetic_count: Option<usize>,
}

#[derive(Debug, Args)]
struct DetectArgs {
    /// A directory of PGM files or a dataset manifest.
    #[arg(long)]
    images: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 3.0)]
    k_sigma: f64,
    #[arg(long, default_value_t = 4)]
    min_area: usize,
    #[arg(long, default_value_t = 50)]
    max_components: usize,
    /// Record mean wall-clock time per image (makes output non-reproducible).
    #[arg(long)]
    timing: bool,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    /// Ground-truth manifest.
    #[arg(long)]
    gt: PathBuf,
    #[arg(long)]
    det: PathBuf,
    /// Restrict scoring to the test set of `--fold` in this splits file.
    #[arg(long, requires = "fold")]
    split: Option<PathBuf>,
    #[arg(long, requires = "split")]
    fold: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ReportArgs {
    #[arg(long, num_args = 1.., required = true)]
    inputs: Vec<PathBuf>,
    /// Print a text table instead of JSON.
    #[arg(long)]
    table: bool,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[arg(long)]
    config: PathBuf,
}

#[derive(Debug, Args)]
struct IngestArgs {
    #[arg(long)]
    images: PathBuf,
    /// Directory of annotation JSON files named after the images.
    #[arg(long)]
    annotations: PathBuf,
    #[arg(long, value_parser = parse_source)]
    source: Source,
    #[arg(long)]
    out: PathBuf,
    /// Existing manifests whose entries are carried over.
    #[arg(long, num_args = 1..)]
    merge: Vec<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn parse_source(s: &str) -> Result<Source, String> {
    match s {
        "real" => Ok(Source::Real),
        "synthetic" => Ok(Source::Synthetic),
        _ => Err(format!("expected `real` or `synthetic`, got `{s}`")),
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Split(a) => split(a),
        Command::Detect(a) => detect(a),
        Command::Evaluate(a) => evaluate(a),
        Command::Report(a) => report(a),
        Command::ValidateConfig(a) => validate_config(a),
        Command::Ingest(a) => ingest(a),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_DATA
        }
    }
}

type CliResult = Result<(), Error>;

fn parent_dir(path: &Path) -> &Path {
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    }
}

fn resolve(base: &Path, rel: &str) -> PathBuf {
    let p = Path::new(rel);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

fn simulate(a: SimulateArgs) -> CliResult {
    let sim = Simulator::from_config_file(&a.config)?;
    let manifest = sim.write_dataset(a.count, a.seed, &a.out)?;
    if a.preview {
        let dir = a.out.join("previews");
        fs::create_dir_all(&dir).map_err(|source| Error::Io {
            path: dir.clone(),
            source,
        })?;
        for e in &manifest.entries {
            let img = read_pgm(&a.out.join(&e.image_path))?;
            let name = Path::new(&e.image_path).file_name().unwrap_or_default();
            let path = dir.join(name);
            fs::write(&path, streakbench_core::dataset::encode_pgm8_preview(&img))
                .map_err(|source| Error::Io { path, source })?;
        }
    }
    let streaks: usize = manifest
        .load_annotations(&a.out)?
        .iter()
        .map(|f| f.objects.len())
        .sum();
    println!(
        "wrote {} frames ({streaks} streaks) to {}",
        manifest.entries.len(),
        a.out.display()
    );
    Ok(())
}

fn split(a: SplitArgs) -> CliResult {
    let manifest = DatasetManifest::load(&a.manifest)?;
    let folds = make_folds(&manifest, a.folds, a.seed)?;
    let doc = SplitsDocument::build(&manifest, folds, a.synthetic_count)?;
    for r in &doc.rounds {
        if r.test.iter().any(|t| r.train.contains(t)) {
            return Err(Error::Config(format!(
                "fold {} leaks test images into training",
                r.test_fold
            )));
        }
    }
    doc.save(&a.out)?;
    let sizes = doc.split.fold_sizes();
    println!(
        "{} real images in {} folds, sizes {sizes:?}",
        doc.split.assignments.len(),
        a.folds
    );
    Ok(())
}

/// `(key, path)` pairs of the images to process, in a stable order.
fn image_list(input: &Path) -> Result<Vec<(String, PathBuf)>, Error> {
    if input.is_dir() {
        let rd = fs::read_dir(input).map_err(|source| Error::Io {
            path: input.to_path_buf(),
            source,
        })?;
        let mut out = Vec::new();
        for entry in rd {
            let entry = entry.map_err(|source| Error::Io {
                path: input.to_path_buf(),
                source,
            })?;
            let path = entry.path();
            if path
                .extension()
                .is_some_and(|e| e.eq_ignore_ascii_case("pgm"))
            {
                out.push((entry.file_name().to_string_lossy().into_owned(), path));
            }
        }
        out.sort();
        Ok(out)
    } else {
        let manifest = DatasetManifest::load(input)?;
        let base = parent_dir(input);
        Ok(manifest
            .entries
            .iter()
            .map(|e| (e.image_path.clone(), resolve(base, &e.image_path)))
            .collect())
    }
}

fn detect(a: DetectArgs) -> CliResult {
    let params = DetectorParams {
        k_sigma: a.k_sigma,
        min_area: a.min_area,
        max_components: a.max_components,
        ..DetectorParams::default()
    };
    params.validate()?;
    let list = image_list(&a.images)?;
    let mut images = Vec::with_capacity(list.len());
    let mut elapsed = 0.0;
    for (key, path) in &list {
        let img = read_pgm(path)?;
        let t0 = Instant::now();
        let detections = detect_streaks(&img, &params);
        elapsed += t0.elapsed().as_secs_f64();
        images.push(ImageDetections {
            image: key.clone(),
            detections,
        });
    }
    let time_ms = (a.timing && !list.is_empty()).then(|| 1e3 * elapsed / list.len() as f64);
    let file = DetectionFile {
        meta: DetectorMeta {
            detector: "baseline".into(),
            gflops: None,
            params_millions: None,
            time_ms,
        },
        images,
    };
    file.save(&a.out)?;
    let n: usize = file.images.iter().map(|i| i.detections.len()).sum();
    println!(
        "{n} detections in {} images -> {}",
        file.images.len(),
        a.out.display()
    );
    Ok(())
}

fn basename(p: &str) -> &str {
    Path::new(p)
        .file_name()
        .and_then(|n| n.to_str())
        .unwrap_or(p)
}

fn evaluate(a: EvaluateArgs) -> CliResult {
    let manifest = DatasetManifest::load(&a.gt)?;
    let base = parent_dir(&a.gt);
    let det = DetectionFile::load(&a.det)?;

    let selected: Vec<&ManifestEntry> = match (&a.split, a.fold) {
        (Some(split_path), Some(fold)) => {
            let doc = SplitsDocument::load(split_path)?;
            let round = doc
                .rounds
                .iter()
                .find(|r| r.test_fold == fold)
                .ok_or_else(|| {
                    Error::Config(format!("splits file has no round for fold {fold}"))
                })?;
            round
                .test
                .iter()
                .map(|p| {
                    manifest.entry(p).ok_or_else(|| {
                        Error::Config(format!("split image {p} is not in the manifest"))
                    })
                })
                .collect::<Result<_, _>>()?
        }
        _ => manifest.entries.iter().collect(),
    };

    let mut by_key: BTreeMap<&str, &ImageDetections> = BTreeMap::new();
    let mut by_name: BTreeMap<&str, Vec<&ImageDetections>> = BTreeMap::new();
    for im in &det.images {
        if by_key.insert(im.image.as_str(), im).is_some() {
            return Err(Error::Format(format!(
                "detection file lists {} twice",
                im.image
            )));
        }
        by_name.entry(basename(&im.image)).or_default().push(im);
    }

    let mut images = BTreeMap::new();
    for e in selected {
        let ann = AnnotationFile::load(&resolve(base, &e.annotation_path))?;
        let ground_truth = ann
            .objects
            .iter()
            .map(|o| BBox::new(o.x as f64, o.y as f64, o.w as f64, o.h as f64))
            .collect();
        let found = by_key.get(e.image_path.as_str()).copied().or_else(|| {
            match by_name.get(basename(&e.image_path)).map(Vec::as_slice) {
                Some([only]) => Some(*only),
                _ => None,
            }
        });
        if found.is_none() {
            log::warn!("no detections listed for {}", e.image_path);
        }
        let detections = found.map(|d| d.detections.clone()).unwrap_or_default();
        images.insert(
            e.image_path.clone(),
            ImageEval {
                detections,
                ground_truth,
            },
        );
    }

    let mut report = ap_report(&images, &default_thresholds(), &det.meta)?;
    report.fold = a.fold;
    if let Some(out) = &a.out {
        report.save(out)?;
    }
    print!("{}", render_table(std::slice::from_ref(&report)));
    Ok(())
}

fn report(a: ReportArgs) -> CliResult {
    let reports: Vec<MetricsReport> = a
        .inputs
        .iter()
        .map(|p| MetricsReport::load(p))
        .collect::<Result<_, _>>()?;
    if a.table {
        print!("{}", render_table(&reports));
    } else {
        let text =
            serde_json::to_string_pretty(&reports).map_err(|e| Error::Format(e.to_string()))?;
        println!("{text}");
    }
    Ok(())
}

fn validate_config(a: ValidateArgs) -> CliResult {
    let sim = Simulator::from_config_file(&a.config)?;
    let s = sim.sensor();
    let (fx, fy) = fov_angles(s);
    println!("configuration OK: {}", a.config.display());
    println!(
        "detector: {} x {} px, pitch {} x {} um, focal length {} um",
        s.n_x, s.n_y, s.x_p_um, s.y_p_um, s.focal_length_um
    );
    println!(
        "FOV: {:.3} deg x {:.3} deg",
        fx.to_degrees(),
        fy.to_degrees()
    );
    println!("FOV (rad): {fx:.12} x {fy:.12}");
    println!(
        "catalogues: {} stars at or brighter than magnitude {}, {} RSOs",
        sim.stars().len(),
        s.magnitude_limit,
        sim.rsos().len()
    );
    Ok(())
}

/// Path of `p` relative to `base` when `p` lies below it, else absolute.
fn relative_to(p: &Path, base: &Path) -> Result<String, Error> {
    let abs = |q: &Path| {
        q.canonicalize().map_err(|source| Error::Io {
            path: q.to_path_buf(),
            source,
        })
    };
    let (p, base) = (abs(p)?, abs(base)?);
    let rel = p.strip_prefix(&base).map(Path::to_path_buf).unwrap_or(p);
    Ok(rel.to_string_lossy().into_owned())
}

fn ingest(a: IngestArgs) -> CliResult {
    let out_dir = parent_dir(&a.out).to_path_buf();
    fs::create_dir_all(&out_dir).map_err(|source| Error::Io {
        path: out_dir.clone(),
        source,
    })?;
    let mut manifest = DatasetManifest::new(a.seed);
    for other in &a.merge {
        let m = DatasetManifest::load(other)?;
        let base = parent_dir(other);
        for mut e in m.entries {
            e.image_path = relative_to(&resolve(base, &e.image_path), &out_dir)?;
            e.annotation_path = relative_to(&resolve(base, &e.annotation_path), &out_dir)?;
            manifest.entries.push(e);
        }
    }
    for (_, image) in image_list(&a.images)? {
        let stem = image
            .file_stem()
            .unwrap_or_default()
            .to_string_lossy()
            .into_owned();
        let ann_path = a.annotations.join(format!("{stem}.json"));
        let ann = AnnotationFile::load(&ann_path)?;
        let img = read_pgm(&image)?;
        if (img.width, img.height) != (ann.width, ann.height) {
            return Err(Error::Format(format!(
                "{} is {}x{} but its annotation says {}x{}",
                image.display(),
                img.width,
                img.height,
                ann.width,
                ann.height
            )));
        }
        manifest.entries.push(ManifestEntry {
            image_path: relative_to(&image, &out_dir)?,
            annotation_path: relative_to(&ann_path, &out_dir)?,
            source: a.source,
            width: img.width,
            height: img.height,
        });
    }
    manifest.save(&a.out)?;
    println!("{} entries -> {}", manifest.entries.len(), a.out.display());
    Ok(())
}
