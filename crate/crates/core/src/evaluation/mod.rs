//! Box matching and average-precision scoring.

mod boxes;
mod matching;
mod metrics;
mod table;

pub use boxes::{iou, BBox, Detection};
pub use matching::{greedy_assignment, match_detections, Match, MatchOutcome};
pub use metrics::{
    ap_report, default_thresholds, DetectionFile, DetectorMeta, ImageDetections, ImageEval,
    MetricsReport,
};
pub use table::render_table;
