use nalgebra::Vector3;

use super::noise::apply_noise_and_quantize;
use super::psf::{auto_annotate, clip_segment, render_point, render_streak};
use super::{Frame, StreakAnnotation};
use crate::catalog::{RsoEntry, StarEntry, TleRecord};
use crate::error::Result;
use crate::photometry::{electrons_from_magnitude, rso_visual_magnitude, RadiometryConfig};
use crate::propagation::{
    observation_geometry, sun_position, unit_vector, Propagator, TwoBody, EARTH_RADIUS_KM,
};
use crate::sensor::{Attitude, CameraView, Pixel, SensorModel};
use crate::time::Epoch;

/// Everything needed to render one exposure apart from the catalogues.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub sensor: SensorModel,
    pub attitude: Attitude,
    pub radiometry: RadiometryConfig,
    /// Orbit of the sensor-host satellite; without one no RSOs are rendered.
    pub observer: Option<TleRecord>,
    pub noise_seed: u64,
}

impl Scene {
    pub fn validate(&self) -> Result<()> {
        self.sensor.validate()?;
        self.radiometry.validate()?;
        CameraView::new(&self.sensor, &self.attitude)?;
        if let Some(tle) = &self.observer {
            TwoBody::new(tle)?;
        }
        Ok(())
    }
}

/// Projected motion of one RSO during an exposure.
#[derive(Debug, Clone, PartialEq)]
pub struct StreakGeometry {
    pub rso_id: u32,
    /// Unclipped endpoints at exposure start and end.
    pub start: Pixel,
    pub end: Pixel,
    /// Portion inside the image rectangle.
    pub clipped: (Pixel, Pixel),
    pub magnitude: f64,
    pub electrons: f64,
}

impl StreakGeometry {
    pub fn length_px(&self) -> f64 {
        self.start.distance(&self.end)
    }
}

/// RSOs whose streak over `[epoch, epoch + exposure_s]` crosses the image.
/// Both endpoints must lie in front of the focal plane and the Earth must not
/// block the mid-exposure line of sight; brightness uses the mid-exposure geometry.
pub fn visible_streaks(
    scene: &Scene,
    view: &CameraView,
    rsos: &[RsoEntry],
    epoch: Epoch,
    exposure_s: f64,
) -> Result<Vec<StreakGeometry>> {
    let Some(observer_tle) = &scene.observer else {
        return Ok(Vec::new());
    };
    if rsos.is_empty() {
        return Ok(Vec::new());
    }
    let observer = TwoBody::new(observer_tle)?;
    let t1 = epoch + exposure_s;
    let mid = epoch + 0.5 * exposure_s;
    let (o0, o1, om) = (
        observer.state_at(epoch)?,
        observer.state_at(t1)?,
        observer.state_at(mid)?,
    );
    let sun = sun_position(mid);
    let (w, h) = (scene.sensor.n_x as f64, scene.sensor.n_y as f64);

    let mut out = Vec::new();
    for rso in rsos {
        let prop = TwoBody::new(&rso.tle)?;
        let d0 = prop.state_at(epoch)?.position - o0.position;
        let d1 = prop.state_at(t1)?.position - o1.position;
        if d0.norm() < 1e-9 || d1.norm() < 1e-9 {
            continue;
        }
        let (Some(start), Some(end)) = (
            view.project_pinhole(&d0.normalize()),
            view.project_pinhole(&d1.normalize()),
        ) else {
            continue;
        };
        let Some((ta, tb)) = clip_segment(start, end, 0.0, 0.0, w, h) else {
            continue;
        };
        let at = |t: f64| {
            Pixel::new(
                start.x + (end.x - start.x) * t,
                start.y + (end.y - start.y) * t,
            )
        };
        let target_mid = prop.state_at(mid)?;
        if earth_blocks(&om.position, &target_mid.position) {
            continue;
        }
        let geom = observation_geometry(&om, &target_mid, &sun)?;
        let magnitude = rso_visual_magnitude(&geom, rso, &scene.radiometry)?;
        out.push(StreakGeometry {
            rso_id: rso.tle.norad_id,
            start,
            end,
            clipped: (at(ta), at(tb)),
            magnitude,
            electrons: electrons_from_magnitude(magnitude, &scene.sensor, &scene.radiometry),
        });
    }
    Ok(out)
}

/// True when the straight line of sight between two points passes through the Earth.
pub fn earth_blocks(from: &Vector3<f64>, to: &Vector3<f64>) -> bool {
    let d = to - from;
    let len2 = d.norm_squared();
    if len2 == 0.0 {
        return false;
    }
    let t = (-from.dot(&d) / len2).clamp(0.0, 1.0);
    (from + t * d).norm() < EARTH_RADIUS_KM
}

/// Part of the streak that can put light inside the annotation margin.
fn annotated_segment(
    s: &StreakGeometry,
    sigma: (f64, f64),
    size: (u32, u32),
) -> Option<(Pixel, Pixel)> {
    let (mx, my) = (3.0 * sigma.0, 3.0 * sigma.1);
    let (ta, tb) = clip_segment(
        s.start,
        s.end,
        -mx,
        -my,
        size.0 as f64 + mx,
        size.1 as f64 + my,
    )?;
    let at = |t: f64| {
        Pixel::new(
            s.start.x + (s.end.x - s.start.x) * t,
            s.start.y + (s.end.y - s.start.y) * t,
        )
    };
    Some((at(ta), at(tb)))
}

fn render_noiseless(
    scene: &Scene,
    stars: &[StarEntry],
    rsos: &[RsoEntry],
    epoch: Epoch,
    seed: u64,
) -> Result<(Frame, Vec<StreakGeometry>)> {
    scene.validate()?;
    let sensor = &scene.sensor;
    let view = CameraView::new(sensor, &scene.attitude)?;
    let mut frame = Frame::new(sensor.n_x, sensor.n_y, seed, epoch, scene.attitude);
    let sigma = sensor.psf_sigma_px;

    for star in stars
        .iter()
        .filter(|s| s.magnitude <= sensor.magnitude_limit)
    {
        if let Some(p) = view.project(&unit_vector(star.ra, star.dec)) {
            let n_e = electrons_from_magnitude(star.magnitude, sensor, &scene.radiometry);
            render_point(&mut frame, p, n_e, sigma);
            frame.star_count += 1;
        }
    }

    let streaks = visible_streaks(scene, &view, rsos, epoch, sensor.t_int_s)?;
    for s in &streaks {
        render_streak(&mut frame, s.start, s.end, s.electrons, sigma);
        let size = (frame.width, frame.height);
        if let Some(b) =
            annotated_segment(s, sigma, size).and_then(|(a, b)| auto_annotate(a, b, sigma, size))
        {
            frame.annotations.push(StreakAnnotation {
                x: b.x,
                y: b.y,
                w: b.w,
                h: b.h,
                endpoints: (s.start.x, s.start.y, s.end.x, s.end.y),
                rso_id: s.rso_id,
                apparent_magnitude: s.magnitude,
            });
        }
    }
    Ok((frame, streaks))
}

/// Renders one exposure starting at `epoch`: stars as dots, RSOs as
/// streaks between their projected start and end positions, then noise.
pub fn render_frame(
    scene: &Scene,
    stars: &[StarEntry],
    rsos: &[RsoEntry],
    epoch: Epoch,
) -> Result<Frame> {
    let (mut frame, _) = render_noiseless(scene, stars, rsos, epoch, scene.noise_seed)?;
    frame.dn = apply_noise_and_quantize(
        &frame.electrons,
        scene.sensor.t_int_s,
        &scene.sensor.noise,
        scene.noise_seed,
    );
    Ok(frame)
}

/// Output of the two-field interleaved exposure mode.
#[derive(Debug, Clone)]
pub struct InterleavedFrames {
    pub full: Frame,
    pub field1: Frame,
    pub field2: Frame,
    /// `field1 - field2` in DN, row-major.
    pub difference: Vec<i32>,
}

/// Splits the integration time into two back-to-back fields. Field 1 owns
/// the even rows of the combined frame, field 2 the odd rows.
pub fn render_interleaved(
    scene: &Scene,
    stars: &[StarEntry],
    rsos: &[RsoEntry],
    epoch: Epoch,
) -> Result<InterleavedFrames> {
    let half = 0.5 * scene.sensor.t_int_s;
    let mut half_scene = scene.clone();
    half_scene.sensor.t_int_s = half;

    let seed1 = crate::rng::derive_seed(scene.noise_seed, 1);
    let seed2 = crate::rng::derive_seed(scene.noise_seed, 2);
    let (mut field1, streaks1) = render_noiseless(&half_scene, stars, rsos, epoch, seed1)?;
    let (mut field2, streaks2) = render_noiseless(&half_scene, stars, rsos, epoch + half, seed2)?;
    let noise = &scene.sensor.noise;
    field1.dn = apply_noise_and_quantize(&field1.electrons, half, noise, seed1);
    field2.dn = apply_noise_and_quantize(&field2.electrons, half, noise, seed2);

    let mut full = Frame::new(
        field1.width,
        field1.height,
        scene.noise_seed,
        epoch,
        scene.attitude,
    );
    let width = full.width as usize;
    for row in 0..full.height as usize {
        let src = if row % 2 == 0 { &field1 } else { &field2 };
        let span = row * width..(row + 1) * width;
        full.electrons[span.clone()].copy_from_slice(&src.electrons[span.clone()]);
        full.dn[span.clone()].copy_from_slice(&src.dn[span]);
    }
    full.star_count = field1.star_count.max(field2.star_count);

    let sigma = scene.sensor.psf_sigma_px;
    let mut ids: Vec<u32> = streaks1.iter().chain(&streaks2).map(|s| s.rso_id).collect();
    ids.sort_unstable();
    ids.dedup();
    for id in ids {
        let parts: Vec<&StreakGeometry> = streaks1
            .iter()
            .chain(&streaks2)
            .filter(|s| s.rso_id == id)
            .collect();
        let size = (full.width, full.height);
        let pts = parts
            .iter()
            .filter_map(|s| annotated_segment(s, sigma, size))
            .flat_map(|(a, b)| [a, b]);
        let (mut lo, mut hi) = (
            Pixel::new(f64::INFINITY, f64::INFINITY),
            Pixel::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        );
        for p in pts {
            lo = Pixel::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Pixel::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        if !lo.x.is_finite() {
            continue;
        }
        let Some(b) = auto_annotate(lo, hi, sigma, size) else {
            continue;
        };
        let start = parts.first().unwrap().start;
        let end = parts.last().unwrap().end;
        let magnitude = parts.iter().map(|s| s.magnitude).sum::<f64>() / parts.len() as f64;
        full.annotations.push(StreakAnnotation {
            x: b.x,
            y: b.y,
            w: b.w,
            h: b.h,
            endpoints: (start.x, start.y, end.x, end.y),
            rso_id: id,
            apparent_magnitude: magnitude,
        });
    }

    let difference = field1
        .dn
        .iter()
        .zip(&field2.dn)
        .map(|(&a, &b)| i32::from(a) - i32::from(b))
        .collect();
    Ok(InterleavedFrames {
        full,
        field1,
        field2,
        difference,
    })
}
