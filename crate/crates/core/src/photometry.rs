//! Magnitudes, phase functions and electron counts.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::catalog::RsoEntry;
use crate::error::{Error, Result};
use crate::propagation::{ObservationGeometry, AU_KM};
use crate::sensor::SensorModel;

pub const SUN_MAGNITUDE: f64 = -26.7;
pub const PLANCK_J_S: f64 = 6.626_070_15e-34;
/// Total solar irradiance at 1 AU.
pub const SUN_IRRADIANCE_W_M2: f64 = 1361.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiometryConfig {
    pub sun_magnitude: f64,
    pub sun_irradiance_w_m2: f64,
    pub planck_j_s: f64,
    /// Dimensionless multiplier on the electron-count formula.
    pub calibration_scale: f64,
    /// Subtract `2.5·log10(p·R²)` (R in metres) from the RSO magnitude.
    pub albedo_area_term: bool,
}

impl Default for RadiometryConfig {
    fn default() -> Self {
        RadiometryConfig {
            sun_magnitude: SUN_MAGNITUDE,
            sun_irradiance_w_m2: SUN_IRRADIANCE_W_M2,
            planck_j_s: PLANCK_J_S,
            calibration_scale: 1.0,
            albedo_area_term: false,
        }
    }
}

impl RadiometryConfig {
    pub fn validate(&self) -> Result<()> {
        for (what, v) in [
            ("sun irradiance", self.sun_irradiance_w_m2),
            ("Planck constant", self.planck_j_s),
            ("calibration scale", self.calibration_scale),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::range(what, v));
            }
        }
        if !self.sun_magnitude.is_finite() {
            return Err(Error::range("sun magnitude", self.sun_magnitude));
        }
        Ok(())
    }

    /// Returns a copy whose calibration scale maps `anchor_magnitude` to
    /// exactly `anchor_electrons` (before full-well clipping).
    pub fn anchored(
        mut self,
        sensor: &SensorModel,
        anchor_magnitude: f64,
        anchor_electrons: f64,
    ) -> Result<Self> {
        if !(anchor_electrons > 0.0 && anchor_electrons.is_finite()) {
            return Err(Error::range(
                "calibration anchor electrons",
                anchor_electrons,
            ));
        }
        self.calibration_scale = 1.0;
        let raw = unclipped_electrons(anchor_magnitude, sensor, &self);
        if !(raw > 0.0 && raw.is_finite()) {
            return Err(Error::Numeric(format!(
                "cannot calibrate against {raw} raw electrons"
            )));
        }
        self.calibration_scale = anchor_electrons / raw;
        Ok(self)
    }
}

/// Specular and diffuse phase-function components `(F_spec, F_diff)`.
pub fn phase_functions(phi: f64) -> Result<(f64, f64)> {
    if !(0.0..=PI).contains(&phi) {
        return Err(Error::range("solar phase angle", phi));
    }
    let f_diff = 2.0 / (3.0 * PI) * ((PI - phi) * phi.cos() + phi.sin());
    Ok((0.25, f_diff))
}

/// Apparent visual magnitude of an RSO from its observation geometry.
pub fn rso_visual_magnitude(
    geom: &ObservationGeometry,
    rso: &RsoEntry,
    cfg: &RadiometryConfig,
) -> Result<f64> {
    let r = geom.sun_range_r_km;
    let delta = geom.range_delta_km;
    if !(r > 0.0) {
        return Err(Error::range("Sun range", r));
    }
    if !(delta > 0.0) {
        return Err(Error::range("observer range", delta));
    }
    let beta = rso.diffusion();
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::range("diffusion coefficient", beta));
    }
    let (f_spec, f_diff) = phase_functions(geom.phase_angle)?;
    let mut m = cfg.sun_magnitude + 5.0 * (r * delta / (AU_KM * AU_KM)).log10()
        - 2.5 * (beta * f_diff + (1.0 - beta) * f_spec).log10();
    if cfg.albedo_area_term {
        m -= 2.5 * (rso.albedo() * rso.radius_m() * rso.radius_m()).log10();
    }
    Ok(m)
}

fn unclipped_electrons(m: f64, sensor: &SensorModel, cfg: &RadiometryConfig) -> f64 {
    let (sx, sy) = sensor.psf_sigma_px;
    let (w_um, h_um) = sensor.detector_size_um();
    let rho = w_um * 1e-6 * h_um * 1e-6;
    cfg.calibration_scale / cfg.planck_j_s
        * cfg.sun_irradiance_w_m2
        * sensor.t_int_s
        * sensor.t_int_s
        * sx
        * sy
        * rho
        * sensor.efficiency
        * 10f64.powf(-(m - cfg.sun_magnitude) / 2.5)
}

/// Electron count collected from a source of magnitude `m`, clipped to
/// `[0, full_well]`.
pub fn electrons_from_magnitude(m: f64, sensor: &SensorModel, cfg: &RadiometryConfig) -> f64 {
    let n = unclipped_electrons(m, sensor, cfg);
    if n.is_nan() {
        0.0
    } else {
        n.clamp(0.0, sensor.full_well_e)
    }
}

/// Peak amplitude of a Gaussian PSF holding `n_e` electrons.
pub fn psf_amplitude(n_e: f64, psf_sigma_px: (f64, f64)) -> f64 {
    n_e / (2.0 * PI * psf_sigma_px.0 * psf_sigma_px.1)
}
