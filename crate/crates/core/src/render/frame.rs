use serde::{Deserialize, Serialize};

use crate::sensor::Attitude;
use crate::time::Epoch;

/// Ground-truth box of one RSO streak, top-left origin, integer pixels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StreakAnnotation {
    pub x: u32,
    pub y: u32,
    pub w: u32,
    pub h: u32,
    /// Streak start and end `(x1, y1, x2, y2)` in continuous pixels.
    pub endpoints: (f64, f64, f64, f64),
    pub rso_id: u32,
    pub apparent_magnitude: f64,
}

/// A rendered image: noiseless electrons, quantized counts and labels.
/// Rasters are row-major, `width` columns by `height` rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub width: u32,
    pub height: u32,
    pub electrons: Vec<f64>,
    pub dn: Vec<u16>,
    pub annotations: Vec<StreakAnnotation>,
    pub rng_seed: u64,
    pub epoch: Epoch,
    pub attitude: Attitude,
    pub star_count: usize,
}

impl Frame {
    pub fn new(width: u32, height: u32, rng_seed: u64, epoch: Epoch, attitude: Attitude) -> Self {
        let n = width as usize * height as usize;
        Frame {
            width,
            height,
            electrons: vec![0.0; n],
            dn: vec![0; n],
            annotations: Vec::new(),
            rng_seed,
            epoch,
            attitude,
            star_count: 0,
        }
    }

    #[inline]
    pub fn index(&self, col: usize, row: usize) -> usize {
        row * self.width as usize + col
    }

    pub fn total_electrons(&self) -> f64 {
        self.electrons.iter().sum()
    }
}
