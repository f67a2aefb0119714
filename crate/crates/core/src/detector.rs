//! Classical streak detector: robust background threshold plus connected components.

use serde::{Deserialize, Serialize};

use crate::dataset::GrayImage16;
use crate::error::{Error, Result};
use crate::evaluation::{BBox, Detection};

/// Scale factor turning a median absolute deviation into a Gaussian sigma.
const MAD_TO_SIGMA: f64 = 1.4826;
/// Mean SNR that maps to a score of 1.
const SCORE_SNR: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorParams {
    pub k_sigma: f64,
    pub min_area: usize,
    pub max_components: usize,
    /// Small blobs rounder than this axis ratio are treated as stars.
    pub min_elongation: f64,
    pub star_area: usize,
}

impl Default for DetectorParams {
    fn default() -> Self {
        DetectorParams {
            k_sigma: 3.0,
            min_area: 4,
            max_components: 50,
            min_elongation: 1.2,
            star_area: 9,
        }
    }
}

impl DetectorParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.k_sigma.is_finite() && self.k_sigma > 0.0) {
            return Err(Error::range("k_sigma", self.k_sigma));
        }
        if self.min_area == 0 {
            return Err(Error::Config("min_area must be at least 1".into()));
        }
        Ok(())
    }
}

/// Background level (median) and robust noise spread of an integer raster.
///
/// Integer deviations make the plain median of `|px - background|` jump in
/// whole DN steps; a 2 DN Gaussian would read as 1. The median is therefore
/// taken as the grouped-data median: deviation `k` stands for the bin
/// `[k - 0.5, k + 0.5)` (`[0, 0.5)` for zero) and the crossing bin is
/// interpolated. A raster without dispersion has spread 0.
pub fn background_stats(img: &GrayImage16) -> (f64, f64) {
    if img.data.is_empty() {
        return (0.0, 0.0);
    }
    let mut v = img.data.clone();
    let mid = v.len() / 2;
    let bg = *v.select_nth_unstable(mid).1;
    let mut dev: Vec<u16> = img.data.iter().map(|&p| p.abs_diff(bg)).collect();
    if dev.iter().all(|&d| d == 0) {
        return (bg as f64, 0.0);
    }
    let k = *dev.select_nth_unstable(mid).1;
    let below = dev.iter().filter(|&&d| d < k).count() as f64;
    let at = dev.iter().filter(|&&d| d == k).count() as f64;
    let (lower, width) = if k == 0 {
        (0.0, 0.5)
    } else {
        (k as f64 - 0.5, 1.0)
    };
    let mad = lower + width * (0.5 * dev.len() as f64 - below) / at;
    (bg as f64, MAD_TO_SIGMA * mad)
}

struct Component {
    area: usize,
    min: (u32, u32),
    max: (u32, u32),
    snr_sum: f64,
    elongation: f64,
}

fn components(img: &GrayImage16, mask: &[bool], bg: f64, spread: f64) -> Vec<Component> {
    let (w, h) = (img.width as usize, img.height as usize);
    let mut seen = vec![false; mask.len()];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    for start in 0..mask.len() {
        if !mask[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        stack.push(start);
        let mut c = Component {
            area: 0,
            min: (u32::MAX, u32::MAX),
            max: (0, 0),
            snr_sum: 0.0,
            elongation: 1.0,
        };
        // Flux-weighted second moments for the principal-axis ratio.
        let (mut sw, mut sx, mut sy, mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        while let Some(i) = stack.pop() {
            let (col, row) = (i % w, i / w);
            let excess = img.data[i] as f64 - bg;
            c.area += 1;
            c.snr_sum += excess / spread;
            c.min = (c.min.0.min(col as u32), c.min.1.min(row as u32));
            c.max = (c.max.0.max(col as u32), c.max.1.max(row as u32));
            let (fx, fy) = (col as f64, row as f64);
            sw += excess;
            sx += excess * fx;
            sy += excess * fy;
            sxx += excess * fx * fx;
            syy += excess * fy * fy;
            sxy += excess * fx * fy;
            for dy in -1i64..=1 {
                for dx in -1i64..=1 {
                    let (nc, nr) = (col as i64 + dx, row as i64 + dy);
                    if nc < 0 || nr < 0 || nc >= w as i64 || nr >= h as i64 {
                        continue;
                    }
                    let j = nr as usize * w + nc as usize;
                    if mask[j] && !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
        let (mx, my) = (sx / sw, sy / sw);
        let (a, b, d) = (sxx / sw - mx * mx, sxy / sw - mx * my, syy / sw - my * my);
        let disc = (((a - d) / 2.0).powi(2) + b * b).sqrt();
        let (l1, l2) = ((a + d) / 2.0 + disc, ((a + d) / 2.0 - disc).max(0.0));
        c.elongation = if l2 > 0.0 {
            (l1 / l2).sqrt()
        } else if l1 > 0.0 {
            f64::INFINITY
        } else {
            1.0
        };
        out.push(c);
    }
    out
}

/// Detects elongated bright structures. Returns boxes ordered by descending score.
pub fn detect_streaks(img: &GrayImage16, params: &DetectorParams) -> Vec<Detection> {
    let (bg, spread) = background_stats(img);
    if spread <= 0.0 {
        return Vec::new();
    }
    let threshold = bg + params.k_sigma * spread;
    let mask: Vec<bool> = img.data.iter().map(|&p| p as f64 > threshold).collect();
    let mut dets: Vec<Detection> = components(img, &mask, bg, spread)
        .into_iter()
        .filter(|c| c.area >= params.min_area)
        .filter(|c| !(c.elongation < params.min_elongation && c.area < params.star_area))
        .map(|c| {
            let x0 = c.min.0.saturating_sub(1);
            let y0 = c.min.1.saturating_sub(1);
            let x1 = (c.max.0 + 2).min(img.width);
            let y1 = (c.max.1 + 2).min(img.height);
            let score = (c.snr_sum / c.area as f64 / SCORE_SNR).clamp(0.0, 1.0);
            let bbox = BBox::new(x0 as f64, y0 as f64, (x1 - x0) as f64, (y1 - y0) as f64);
            Detection::new(bbox, score)
        })
        .collect();
    dets.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then(a.x.total_cmp(&b.x))
            .then(a.y.total_cmp(&b.y))
    });
    dets.truncate(params.max_components);
    dets
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluation::iou;
    use crate::render::{
        apply_noise_and_quantize, auto_annotate, quantize, render_streak, Frame, NoiseConfig,
    };
    use crate::sensor::{Attitude, Pixel};
    use crate::time::Epoch;

    fn noisy(w: u32, h: u32) -> GrayImage16 {
        // Deterministic +-2 DN texture around 100.
        let data = (0..w * h).map(|i| 100 + ((i * 7919) % 5) as u16).collect();
        GrayImage16::new(w, h, data).unwrap()
    }

    fn noise_frame(w: u32, h: u32, seed: u64) -> GrayImage16 {
        let noise = NoiseConfig {
            sky_background_e: 100.0,
            read_noise_e: 2.0,
            dark_current_e_s: 0.0,
            gain_e_per_dn: 1.0,
            enable_shot_noise: false,
        };
        let dn = apply_noise_and_quantize(&vec![0.0; (w * h) as usize], 1.0, &noise, seed);
        GrayImage16::new(w, h, dn).unwrap()
    }

    #[test]
    fn spread_of_rounded_gaussian() {
        // Rounded N(0, 2): P(|d| < 0.5) = 0.1974, P(|d| < 1.5) = 0.5467, so
        // the grouped median is 0.5 + (0.5 - 0.1974) / 0.3493 = 1.366.
        let (bg, spread) = background_stats(&noise_frame(300, 300, 5));
        assert_eq!(bg, 100.0);
        assert!((spread - 1.4826 * 1.366).abs() < 0.03, "{spread}");
    }

    #[test]
    fn pure_noise_rarely_triggers() {
        let params = DetectorParams {
            k_sigma: 3.0,
            ..DetectorParams::default()
        };
        let total: usize = (0..20)
            .map(|s| detect_streaks(&noise_frame(256, 256, s), &params).len())
            .sum();
        assert!((total as f64) / 20.0 < 2.0, "{total}");
    }

    #[test]
    fn noise_free_streak() {
        let mut f = Frame::new(120, 80, 0, Epoch::J2000, Attitude::new(0.0, 0.0, 0.0));
        let (a, b) = (Pixel::new(30.5, 40.5), Pixel::new(70.5, 40.5));
        render_streak(&mut f, a, b, 40_000.0, (1.0, 1.0));
        let img = GrayImage16::new(
            120,
            80,
            f.electrons.iter().map(|&e| quantize(e, 1.0)).collect(),
        )
        .unwrap();
        let dets = detect_streaks(&img, &DetectorParams::default());
        assert_eq!(dets.len(), 1);
        let gt = auto_annotate(a, b, (1.0, 1.0), (120, 80)).unwrap();
        let gt = BBox::new(gt.x as f64, gt.y as f64, gt.w as f64, gt.h as f64);
        assert!(iou(&dets[0].bbox(), &gt) >= 0.5, "{:?} vs {gt:?}", dets[0]);
    }

    #[test]
    fn constant_image_is_empty() {
        let img = GrayImage16::new(16, 16, vec![0; 256]).unwrap();
        assert!(detect_streaks(&img, &DetectorParams::default()).is_empty());
    }

    #[test]
    fn finds_bright_line() {
        let mut img = noisy(64, 32);
        for x in 10..40 {
            img.data[15 * 64 + x] = 2000;
            img.data[16 * 64 + x] = 2000;
        }
        let dets = detect_streaks(&img, &DetectorParams::default());
        assert_eq!(dets.len(), 1);
        assert_eq!(dets[0].bbox(), BBox::new(9.0, 14.0, 32.0, 4.0));
        assert_eq!(dets[0].score, 1.0);
    }

    #[test]
    fn round_blob_is_rejected() {
        let mut img = noisy(32, 32);
        for (x, y) in [(10, 10), (11, 10), (10, 11), (11, 11)] {
            img.data[y * 32 + x] = 3000;
        }
        assert!(detect_streaks(&img, &DetectorParams::default()).is_empty());
    }

    #[test]
    fn box_clipped_at_border() {
        let mut img = noisy(32, 8);
        for x in 0..12 {
            img.data[x] = 3000;
        }
        let dets = detect_streaks(&img, &DetectorParams::default());
        assert_eq!(dets[0].bbox(), BBox::new(0.0, 0.0, 13.0, 2.0));
    }

    #[test]
    fn invariant_to_offset() {
        let mut img = noisy(48, 24);
        for x in 5..30 {
            img.data[(x / 3 + 2) * 48 + x] = 900;
        }
        let base = detect_streaks(&img, &DetectorParams::default());
        let shifted =
            GrayImage16::new(48, 24, img.data.iter().map(|v| v + 1234).collect()).unwrap();
        assert_eq!(base, detect_streaks(&shifted, &DetectorParams::default()));
        assert!(!base.is_empty());
    }
}
