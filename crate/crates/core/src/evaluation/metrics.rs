use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::boxes::{BBox, Detection};
use super::matching::greedy_assignment;
use crate::error::{Error, Result};

/// Cost figures reported alongside a detector's accuracy. Unknown values stay `None`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DetectorMeta {
    pub detector: String,
    pub gflops: Option<f64>,
    pub params_millions: Option<f64>,
    pub time_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageDetections {
    pub image: String,
    pub detections: Vec<Detection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionFile {
    pub meta: DetectorMeta,
    pub images: Vec<ImageDetections>,
}

impl DetectionFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::json(path, e))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self).map_err(|e| Error::json(path, e))?;
        text.push('\n');
        fs::write(path, text).map_err(|e| Error::io(path, e))
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ImageEval {
    pub detections: Vec<Detection>,
    pub ground_truth: Vec<BBox>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub detector: String,
    pub fold: Option<usize>,
    pub images: usize,
    /// Images with at least one detection or one ground-truth box.
    pub contributing_images: usize,
    pub ap_range: f64,
    pub ap_03: f64,
    pub ap_05: f64,
    pub per_threshold: BTreeMap<String, f64>,
    pub gflops: Option<f64>,
    pub params_millions: Option<f64>,
    pub time_ms: Option<f64>,
}

/// IoU thresholds 0.30, 0.35, ..., 0.95.
pub fn default_thresholds() -> Vec<f64> {
    (0..14).map(|k| (30 + 5 * k) as f64 / 100.0).collect()
}

/// Mean over images of per-image precision TP / (TP + FP) at each threshold.
/// An image with ground truth but no detections scores 0; an image with
/// neither is skipped.
pub fn ap_report(
    images: &BTreeMap<String, ImageEval>,
    thresholds: &[f64],
    meta: &DetectorMeta,
) -> Result<MetricsReport> {
    if images.is_empty() {
        return Err(Error::Config("no images to evaluate".into()));
    }
    if thresholds.is_empty() {
        return Err(Error::Config("empty IoU threshold grid".into()));
    }
    if let Some(t) = thresholds.iter().find(|t| !(0.0..=1.0).contains(*t)) {
        return Err(Error::range("IoU threshold", *t));
    }
    // Per contributing image: detection count and the IoUs of its matches.
    let scored: Vec<(usize, Vec<f64>)> = images
        .values()
        .filter(|im| !im.detections.is_empty() || !im.ground_truth.is_empty())
        .map(|im| {
            let ious = greedy_assignment(&im.detections, &im.ground_truth)
                .into_iter()
                .map(|m| m.iou)
                .collect();
            (im.detections.len(), ious)
        })
        .collect();
    if scored.is_empty() {
        return Err(Error::Config(
            "no image has either detections or ground truth".into(),
        ));
    }
    let ap_at = |tau: f64| {
        let total: f64 = scored
            .iter()
            .map(|(n, ious)| {
                if *n == 0 {
                    0.0
                } else {
                    ious.iter().filter(|&&v| v >= tau).count() as f64 / *n as f64
                }
            })
            .sum();
        total / scored.len() as f64
    };
    let per_threshold: BTreeMap<String, f64> = thresholds
        .iter()
        .map(|&t| (format!("{t:.2}"), ap_at(t)))
        .collect();
    let ap_range = thresholds.iter().map(|&t| ap_at(t)).sum::<f64>() / thresholds.len() as f64;
    Ok(MetricsReport {
        detector: meta.detector.clone(),
        fold: None,
        images: images.len(),
        contributing_images: scored.len(),
        ap_range,
        ap_03: ap_at(0.3),
        ap_05: ap_at(0.5),
        per_threshold,
        gflops: meta.gflops,
        params_millions: meta.params_millions,
        time_ms: meta.time_ms,
    })
}

impl MetricsReport {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::json(path, e))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self).map_err(|e| Error::json(path, e))?;
        text.push('\n');
        fs::write(path, text).map_err(|e| Error::io(path, e))
    }
}
