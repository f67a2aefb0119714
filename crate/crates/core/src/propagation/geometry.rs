use std::f64::consts::TAU;

use nalgebra::Vector3;

use super::StateVector;
use crate::error::{Error, Result};

/// Observer-to-target geometry needed for RSO photometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservationGeometry {
    pub ra: f64,
    pub dec: f64,
    /// Target-to-observer distance, km.
    pub range_delta_km: f64,
    /// Target-to-Sun distance, km.
    pub sun_range_r_km: f64,
    /// Sun-target-observer angle, `[0, π]`.
    pub phase_angle: f64,
}

pub fn unit_vector(ra: f64, dec: f64) -> Vector3<f64> {
    let (sd, cd) = dec.sin_cos();
    let (sa, ca) = ra.sin_cos();
    Vector3::new(cd * ca, cd * sa, sd)
}

/// Right ascension in `[0, 2π)` and declination of a non-zero vector.
pub fn radec_of(v: &Vector3<f64>) -> (f64, f64) {
    let ra = v.y.atan2(v.x).rem_euclid(TAU);
    let dec = v.z.atan2((v.x * v.x + v.y * v.y).sqrt());
    (if ra >= TAU { 0.0 } else { ra }, dec)
}

pub fn observation_geometry(
    observer: &StateVector,
    target: &StateVector,
    sun: &Vector3<f64>,
) -> Result<ObservationGeometry> {
    if (observer.epoch - target.epoch).abs() > 1e-6 {
        return Err(Error::DegenerateGeometry(format!(
            "observer epoch {} differs from target epoch {}",
            observer.epoch, target.epoch
        )));
    }
    let line_of_sight = target.position - observer.position;
    let range = line_of_sight.norm();
    if !(range > 1e-9) {
        return Err(Error::DegenerateGeometry(
            "observer and target coincide".into(),
        ));
    }
    let to_sun = sun - target.position;
    let sun_range = to_sun.norm();
    if !(sun_range > 1e-9) {
        return Err(Error::DegenerateGeometry(
            "target coincides with the Sun".into(),
        ));
    }
    let (ra, dec) = radec_of(&line_of_sight);
    let to_observer = -line_of_sight;
    let phase = to_sun
        .cross(&to_observer)
        .norm()
        .atan2(to_sun.dot(&to_observer));
    Ok(ObservationGeometry {
        ra,
        dec,
        range_delta_km: range,
        sun_range_r_km: sun_range,
        phase_angle: phase.clamp(0.0, std::f64::consts::PI),
    })
}
