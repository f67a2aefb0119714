//! Sensor model and the celestial-to-detector projection chain.
//!
//! Frames: celestial (equatorial unit vectors), star tracker (`z_s` along the
//! boresight, `y_s` toward celestial north at zero roll) and image (metric
//! coordinates on the detector, origin at the detector corner).

use std::f64::consts::FRAC_PI_2;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::render::NoiseConfig;

/// Optics, detector and exposure parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensorModel {
    pub focal_length_um: f64,
    pub n_x: u32,
    pub n_y: u32,
    pub x_p_um: f64,
    pub y_p_um: f64,
    /// Principal point `(x0, y0)` in µm from the detector corner.
    pub principal_point_um: (f64, f64),
    pub t_int_s: f64,
    /// Gaussian PSF widths `(σx, σy)` in pixels.
    pub psf_sigma_px: (f64, f64),
    /// Combined lens and quantum efficiency.
    pub efficiency: f64,
    pub magnitude_limit: f64,
    pub full_well_e: f64,
    pub noise: NoiseConfig,
}

impl SensorModel {
    /// Swarm µASC camera head unit. Parameters not published for the
    /// instrument (PSF width, efficiency, noise) take neutral defaults.
    pub fn swarm() -> Self {
        let mut s = SensorModel {
            focal_length_um: 19_980.0,
            n_x: 752,
            n_y: 580,
            x_p_um: 8.6,
            y_p_um: 8.3,
            principal_point_um: (0.0, 0.0),
            t_int_s: 1.0,
            psf_sigma_px: (1.0, 1.0),
            efficiency: 1.0,
            magnitude_limit: 6.5,
            full_well_e: 100_000.0,
            noise: NoiseConfig::default(),
        };
        s.principal_point_um = s.detector_centre_um();
        s
    }

    pub fn detector_size_um(&self) -> (f64, f64) {
        (self.n_x as f64 * self.x_p_um, self.n_y as f64 * self.y_p_um)
    }

    pub fn detector_centre_um(&self) -> (f64, f64) {
        let (w, h) = self.detector_size_um();
        (0.5 * w, 0.5 * h)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("focal length (µm)", self.focal_length_um),
            ("pixel pitch x_p (µm)", self.x_p_um),
            ("pixel pitch y_p (µm)", self.y_p_um),
            ("PSF sigma x (px)", self.psf_sigma_px.0),
            ("PSF sigma y (px)", self.psf_sigma_px.1),
            ("integration time (s)", self.t_int_s),
            ("full well (e-)", self.full_well_e),
        ];
        for (what, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::range(what, v));
            }
        }
        if self.n_x == 0 {
            return Err(Error::range("n_x", 0.0));
        }
        if self.n_y == 0 {
            return Err(Error::range("n_y", 0.0));
        }
        if !(self.efficiency > 0.0 && self.efficiency <= 1.0) {
            return Err(Error::range("efficiency", self.efficiency));
        }
        if self.magnitude_limit.is_nan() {
            return Err(Error::range("magnitude limit", self.magnitude_limit));
        }
        let (x0, y0) = self.principal_point_um;
        if !(x0.is_finite() && y0.is_finite()) {
            return Err(Error::Config("principal point must be finite".into()));
        }
        self.noise.validate()
    }
}

/// Boresight right ascension, declination and roll, radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Attitude {
    pub alpha0: f64,
    pub delta0: f64,
    pub roll_phi0: f64,
}

impl Attitude {
    pub fn new(alpha0: f64, delta0: f64, roll_phi0: f64) -> Self {
        Attitude {
            alpha0,
            delta0,
            roll_phi0,
        }
    }

    pub fn from_degrees(alpha0: f64, delta0: f64, roll_phi0: f64) -> Self {
        Attitude::new(
            alpha0.to_radians(),
            delta0.to_radians(),
            roll_phi0.to_radians(),
        )
    }
}

/// Continuous pixel coordinate, origin at the detector corner. Pixel
/// `(i, j)` covers `[i, i+1) × [j, j+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pixel {
    pub x: f64,
    pub y: f64,
}

impl Pixel {
    pub fn new(x: f64, y: f64) -> Self {
        Pixel { x, y }
    }

    pub fn distance(&self, other: &Pixel) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

pub fn boresight_vector(att: &Attitude) -> Vector3<f64> {
    crate::propagation::unit_vector(att.alpha0, att.delta0)
}

/// Full angular extents `(θx, θy)` of the detector, radians.
pub fn fov_angles(sensor: &SensorModel) -> (f64, f64) {
    let f = sensor.focal_length_um;
    let (w, h) = sensor.detector_size_um();
    (2.0 * (w / (2.0 * f)).atan(), 2.0 * (h / (2.0 * f)).atan())
}

/// Rotation from celestial to star-tracker coordinates. Rows are the
/// sensor axes expressed in celestial coordinates.
pub fn attitude_matrix(att: &Attitude) -> Result<Matrix3<f64>> {
    if !(att.delta0.abs() < FRAC_PI_2 - 1e-9) {
        return Err(Error::DegenerateAttitude(att.delta0));
    }
    let z = boresight_vector(att);
    let pole = Vector3::z();
    let y0 = (pole - z * pole.dot(&z)).normalize();
    let x0 = y0.cross(&z);
    let (s, c) = att.roll_phi0.sin_cos();
    let x = x0 * c + y0 * s;
    let y = y0 * c - x0 * s;
    Ok(Matrix3::from_rows(&[
        x.transpose(),
        y.transpose(),
        z.transpose(),
    ]))
}

/// Precomputed projection for one sensor pointing.
#[derive(Debug, Clone)]
pub struct CameraView {
    rotation: Matrix3<f64>,
    boresight: Vector3<f64>,
    half_fov: (f64, f64),
    focal_length_um: f64,
    principal_point_um: (f64, f64),
    pitch_um: (f64, f64),
    size_um: (f64, f64),
}

impl CameraView {
    pub fn new(sensor: &SensorModel, att: &Attitude) -> Result<Self> {
        let (fx, fy) = fov_angles(sensor);
        Ok(CameraView {
            rotation: attitude_matrix(att)?,
            boresight: boresight_vector(att),
            half_fov: (0.5 * fx, 0.5 * fy),
            focal_length_um: sensor.focal_length_um,
            principal_point_um: sensor.principal_point_um,
            pitch_um: (sensor.x_p_um, sensor.y_p_um),
            size_um: sensor.detector_size_um(),
        })
    }

    pub fn rotation(&self) -> &Matrix3<f64> {
        &self.rotation
    }

    /// Angular admission test on the boresight distance followed by the
    /// pinhole projection and the detector bounds check.
    pub fn project(&self, dir: &Vector3<f64>) -> Option<Pixel> {
        let theta = self
            .boresight
            .cross(dir)
            .norm()
            .atan2(self.boresight.dot(dir));
        if theta >= self.half_fov.0 || theta >= self.half_fov.1 {
            return None;
        }
        let (xi, yi) = self.image_plane(dir)?;
        let (w, h) = self.size_um;
        if !(0.0..w).contains(&xi) || !(0.0..h).contains(&yi) {
            return None;
        }
        Some(Pixel::new(xi / self.pitch_um.0, yi / self.pitch_um.1))
    }

    /// Pinhole projection without field-of-view or bounds checks; `None`
    /// only for directions behind the focal plane.
    pub fn project_pinhole(&self, dir: &Vector3<f64>) -> Option<Pixel> {
        let (xi, yi) = self.image_plane(dir)?;
        Some(Pixel::new(xi / self.pitch_um.0, yi / self.pitch_um.1))
    }

    fn image_plane(&self, dir: &Vector3<f64>) -> Option<(f64, f64)> {
        let s = self.rotation * dir;
        if s.z <= 0.0 {
            return None;
        }
        let f = self.focal_length_um;
        let (x0, y0) = self.principal_point_um;
        Some((f * s.x / s.z + x0, f * s.y / s.z + y0))
    }

    /// Unit celestial direction imaged at `p`.
    pub fn back_project(&self, p: Pixel) -> Vector3<f64> {
        let f = self.focal_length_um;
        let (x0, y0) = self.principal_point_um;
        let s = Vector3::new(
            (p.x * self.pitch_um.0 - x0) / f,
            (p.y * self.pitch_um.1 - y0) / f,
            1.0,
        )
        .normalize();
        self.rotation.transpose() * s
    }
}

pub fn project_to_detector(
    target_dir: &Vector3<f64>,
    att: &Attitude,
    sensor: &SensorModel,
) -> Result<Option<Pixel>> {
    Ok(CameraView::new(sensor, att)?.project(target_dir))
}
