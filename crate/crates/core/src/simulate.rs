//! Per-frame scenario sampling and dataset generation.

use std::fs;
use std::path::Path;

use nalgebra::Vector3;
use rand::{Rng, RngCore};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::catalog::{filter_visible, RsoEntry, StarEntry, TleRecord};
use crate::config::{AttitudeMode, SceneConfig};
use crate::dataset::{write_frame, DatasetManifest, ManifestEntry, Source};
use crate::error::{Error, Result};
use crate::photometry::RadiometryConfig;
use crate::propagation::{radec_of, Propagator, TwoBody};
use crate::render::{render_frame, render_interleaved, visible_streaks, Frame, Scene};
use crate::rng::stream_rng;
use crate::sensor::{attitude_matrix, fov_angles, Attitude, CameraView, SensorModel};
use crate::time::Epoch;

/// Sampled conditions of one frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FramePlan {
    pub index: u64,
    pub epoch: Epoch,
    pub attitude: Attitude,
    pub noise_seed: u64,
    pub attempts: u32,
}

/// A validated configuration with its catalogues loaded.
#[derive(Debug, Clone)]
pub struct Simulator {
    config: SceneConfig,
    sensor: SensorModel,
    radiometry: RadiometryConfig,
    observer: Option<TleRecord>,
    stars: Vec<StarEntry>,
    rsos: Vec<RsoEntry>,
}

impl Simulator {
    pub fn new(config: SceneConfig, stars: Vec<StarEntry>, rsos: Vec<RsoEntry>) -> Result<Self> {
        config.validate()?;
        let sensor = config.sensor_model()?;
        let radiometry = config.radiometry(&sensor)?;
        let observer = config.observer()?;
        if config.boresight.mode == AttitudeMode::Target && (rsos.is_empty() || observer.is_none())
        {
            return Err(Error::Config(
                "target mode needs an observer and at least one RSO".into(),
            ));
        }
        let stars = filter_visible(&stars, sensor.magnitude_limit);
        Ok(Simulator {
            config,
            sensor,
            radiometry,
            observer,
            stars,
            rsos,
        })
    }

    /// Loads the configuration and the catalogues it references.
    pub fn from_config_file(path: &Path) -> Result<Self> {
        let config = SceneConfig::load(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        let stars = config.load_stars(base)?;
        let rsos = config.load_rsos(base)?;
        Self::new(config, stars, rsos)
    }

    pub fn sensor(&self) -> &SensorModel {
        &self.sensor
    }

    pub fn stars(&self) -> &[StarEntry] {
        &self.stars
    }

    pub fn rsos(&self) -> &[RsoEntry] {
        &self.rsos
    }

    pub fn scene(&self, attitude: Attitude, noise_seed: u64) -> Scene {
        Scene {
            sensor: self.sensor.clone(),
            attitude,
            radiometry: self.radiometry,
            observer: self.observer.clone(),
            noise_seed,
        }
    }

    fn random_attitude(rng: &mut ChaCha8Rng) -> Attitude {
        let alpha = rng.random::<f64>() * std::f64::consts::TAU;
        let delta = (2.0 * rng.random::<f64>() - 1.0).asin();
        let phi = rng.random::<f64>() * std::f64::consts::TAU;
        Attitude::new(alpha, delta, phi)
    }

    /// Points near one RSO's mid-exposure line of sight, offset uniformly
    /// over a disc of radius `target_offset` times the smaller half-FOV.
    fn target_attitude(&self, rng: &mut ChaCha8Rng, epoch: Epoch) -> Result<Attitude> {
        let rso = &self.rsos[rng.random_range(0..self.rsos.len())];
        let observer = self.observer.as_ref().expect("checked in Simulator::new");
        let mid = epoch + 0.5 * self.sensor.t_int_s;
        let los: Vector3<f64> = TwoBody::new(&rso.tle)?.state_at(mid)?.position
            - TwoBody::new(observer)?.state_at(mid)?.position;
        let (ra, dec) = radec_of(&los);
        let roll = rng.random::<f64>() * std::f64::consts::TAU;
        let (fx, fy) = fov_angles(&self.sensor);
        let radius =
            self.config.boresight.target_offset * 0.5 * fx.min(fy) * rng.random::<f64>().sqrt();
        let theta = rng.random::<f64>() * std::f64::consts::TAU;
        let m = attitude_matrix(&Attitude::new(ra, dec, 0.0))?;
        let (x, y, z) = (
            m.row(0).transpose(),
            m.row(1).transpose(),
            m.row(2).transpose(),
        );
        let b = z + radius.tan() * (theta.cos() * x + theta.sin() * y);
        let (alpha, delta) = radec_of(&b);
        Ok(Attitude::new(alpha, delta, roll))
    }

    /// Draws the epoch and attitude of frame `index`. Frame `index` uses its
    /// own random stream, so plans do not depend on how many frames are made.
    pub fn plan_frame(&self, seed: u64, index: u64) -> Result<FramePlan> {
        let mut rng = stream_rng(seed, index);
        let b = &self.config.boresight;
        let span = self.config.scenario.epoch_span_s;
        for attempt in 1..=b.max_attempts {
            let epoch = self.config.scenario.epoch + span * rng.random::<f64>();
            let attitude = match b.mode {
                AttitudeMode::Fixed => self.config.fixed_attitude(),
                AttitudeMode::Random => Self::random_attitude(&mut rng),
                AttitudeMode::Target => self.target_attitude(&mut rng, epoch)?,
            };
            let view = match CameraView::new(&self.sensor, &attitude) {
                Ok(v) => v,
                Err(Error::DegenerateAttitude(_)) => continue,
                Err(e) => return Err(e),
            };
            if b.require_streak {
                let scene = self.scene(attitude, 0);
                let (lo, hi) = (
                    b.min_streak_px.unwrap_or(0.0),
                    b.max_streak_px.unwrap_or(f64::INFINITY),
                );
                let streaks =
                    visible_streaks(&scene, &view, &self.rsos, epoch, self.sensor.t_int_s)?;
                if !streaks.iter().any(|s| (lo..=hi).contains(&s.length_px())) {
                    continue;
                }
            }
            return Ok(FramePlan {
                index,
                epoch,
                attitude,
                noise_seed: rng.next_u64(),
                attempts: attempt,
            });
        }
        Err(Error::Config(format!(
            "frame {index}: no usable attitude after {} attempts",
            b.max_attempts
        )))
    }

    pub fn render_planned(&self, plan: &FramePlan) -> Result<Frame> {
        let scene = self.scene(plan.attitude, plan.noise_seed);
        if self.config.image_generation.interleaved {
            Ok(render_interleaved(&scene, &self.stars, &self.rsos, plan.epoch)?.full)
        } else {
            render_frame(&scene, &self.stars, &self.rsos, plan.epoch)
        }
    }

    pub fn render(&self, seed: u64, index: u64) -> Result<Frame> {
        self.render_planned(&self.plan_frame(seed, index)?)
    }

    /// Renders `count` frames in parallel into `out_dir/images` and
    /// `out_dir/annotations` and writes `out_dir/manifest.json`.
    pub fn write_dataset(
        &self,
        count: usize,
        seed: u64,
        out_dir: &Path,
    ) -> Result<DatasetManifest> {
        let images = out_dir.join("images");
        let annotations = out_dir.join("annotations");
        for dir in [&images, &annotations] {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
        let entries = (0..count as u64)
            .into_par_iter()
            .map(|i| {
                let frame = self.render(seed, i)?;
                let name = format!("frame_{i:05}");
                let image_path = format!("images/{name}.pgm");
                let annotation_path = format!("annotations/{name}.json");
                write_frame(
                    &frame,
                    &out_dir.join(&image_path),
                    &out_dir.join(&annotation_path),
                )?;
                log::debug!(
                    "{name}: {} stars, {} streaks",
                    frame.star_count,
                    frame.annotations.len()
                );
                Ok(ManifestEntry {
                    image_path,
                    annotation_path,
                    source: Source::Synthetic,
                    width: frame.width,
                    height: frame.height,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let manifest = DatasetManifest { seed, entries };
        manifest.save(&out_dir.join("manifest.json"))?;
        Ok(manifest)
    }
}
