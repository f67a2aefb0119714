use std::cmp::Ordering;

use super::boxes::{iou, BBox, Detection};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Match {
    pub detection: usize,
    pub ground_truth: usize,
    pub iou: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchOutcome {
    pub true_positives: usize,
    pub false_positives: usize,
    pub matches: Vec<Match>,
}

fn score_order(a: &Detection, b: &Detection) -> Ordering {
    b.score
        .total_cmp(&a.score)
        .then(a.x.total_cmp(&b.x))
        .then(a.y.total_cmp(&b.y))
}

/// Visits detections by descending score; each claims the unclaimed ground
/// truth it overlaps most (lowest index on ties). Zero-overlap pairs never match.
/// The pairing does not depend on any IoU threshold.
pub fn greedy_assignment(detections: &[Detection], ground_truth: &[BBox]) -> Vec<Match> {
    let mut order: Vec<usize> = (0..detections.len()).collect();
    order.sort_by(|&i, &j| score_order(&detections[i], &detections[j]).then(i.cmp(&j)));
    let mut claimed = vec![false; ground_truth.len()];
    let mut matches = Vec::new();
    for d in order {
        let b = detections[d].bbox();
        let mut best: Option<(usize, f64)> = None;
        for (g, gt) in ground_truth.iter().enumerate() {
            if claimed[g] {
                continue;
            }
            let v = iou(&b, gt);
            if v > 0.0 && best.is_none_or(|(_, bv)| v > bv) {
                best = Some((g, v));
            }
        }
        if let Some((g, v)) = best {
            claimed[g] = true;
            matches.push(Match {
                detection: d,
                ground_truth: g,
                iou: v,
            });
        }
    }
    matches
}

/// A detection is a true positive when its assigned ground truth has IoU >= `tau`.
pub fn match_detections(detections: &[Detection], ground_truth: &[BBox], tau: f64) -> MatchOutcome {
    let matches = greedy_assignment(detections, ground_truth);
    let tp = matches.iter().filter(|m| m.iou >= tau).count();
    MatchOutcome {
        true_positives: tp,
        false_positives: detections.len() - tp,
        matches,
    }
}
