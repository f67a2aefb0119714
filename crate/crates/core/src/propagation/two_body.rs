use std::f64::consts::TAU;

use nalgebra::{Matrix3, Vector3};

use super::{solve_kepler, MU_EARTH_KM3_S2};
use crate::catalog::TleRecord;
use crate::error::{Error, Result};
use crate::time::{Epoch, SECONDS_PER_DAY};

const WARN_SPAN_DAYS: f64 = 30.0;

/// Earth-centred inertial state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector {
    pub epoch: Epoch,
    /// km
    pub position: Vector3<f64>,
    /// km/s
    pub velocity: Vector3<f64>,
}

impl StateVector {
    pub fn specific_energy(&self) -> f64 {
        0.5 * self.velocity.norm_squared() - MU_EARTH_KM3_S2 / self.position.norm()
    }

    pub fn angular_momentum(&self) -> Vector3<f64> {
        self.position.cross(&self.velocity)
    }
}

pub trait Propagator {
    fn state_at(&self, epoch: Epoch) -> Result<StateVector>;
}

/// Keplerian propagation of TLE mean elements. Drag (`bstar`) and all other
/// perturbations are ignored.
#[derive(Debug, Clone)]
pub struct TwoBody {
    epoch: Epoch,
    eccentricity: f64,
    mean_anomaly: f64,
    /// rad/s
    mean_motion: f64,
    /// km
    semi_major_axis: f64,
    /// Perifocal-to-inertial rotation.
    rotation: Matrix3<f64>,
}

impl TwoBody {
    pub fn new(tle: &TleRecord) -> Result<Self> {
        let e = tle.eccentricity;
        if !(0.0..1.0).contains(&e) {
            return Err(Error::UnsupportedOrbit(e));
        }
        if !(tle.mean_motion > 0.0) {
            return Err(Error::range("mean motion", tle.mean_motion));
        }
        let n = tle.mean_motion * TAU / SECONDS_PER_DAY;
        let a = (MU_EARTH_KM3_S2 / (n * n)).cbrt();

        let (so, co) = tle.raan.sin_cos();
        let (sw, cw) = tle.arg_perigee.sin_cos();
        let (si, ci) = tle.inclination.sin_cos();
        let p = Vector3::new(co * cw - so * sw * ci, so * cw + co * sw * ci, sw * si);
        let q = Vector3::new(-co * sw - so * cw * ci, -so * sw + co * cw * ci, cw * si);
        let w = Vector3::new(so * si, -co * si, ci);

        Ok(TwoBody {
            epoch: tle.epoch,
            eccentricity: e,
            mean_anomaly: tle.mean_anomaly,
            mean_motion: n,
            semi_major_axis: a,
            rotation: Matrix3::from_columns(&[p, q, w]),
        })
    }

    pub fn semi_major_axis_km(&self) -> f64 {
        self.semi_major_axis
    }

    pub fn period_s(&self) -> f64 {
        TAU / self.mean_motion
    }
}

impl Propagator for TwoBody {
    fn state_at(&self, epoch: Epoch) -> Result<StateVector> {
        let dt = epoch - self.epoch;
        if dt.abs() > WARN_SPAN_DAYS * SECONDS_PER_DAY {
            log::warn!(
                "propagating {:.1} days from element epoch; two-body error grows quickly",
                dt / SECONDS_PER_DAY
            );
        }
        let e = self.eccentricity;
        let a = self.semi_major_axis;
        let big_e = solve_kepler(self.mean_anomaly + self.mean_motion * dt, e)?;
        let (s, c) = big_e.sin_cos();
        let root = (1.0 - e * e).sqrt();
        let radius = a * (1.0 - e * c);
        let r_pf = Vector3::new(a * (c - e), a * root * s, 0.0);
        let v_scale = (MU_EARTH_KM3_S2 * a).sqrt() / radius;
        let v_pf = Vector3::new(-v_scale * s, v_scale * root * c, 0.0);
        Ok(StateVector {
            epoch,
            position: self.rotation * r_pf,
            velocity: self.rotation * v_pf,
        })
    }
}

pub fn propagate_two_body(tle: &TleRecord, epoch: Epoch) -> Result<StateVector> {
    TwoBody::new(tle)?.state_at(epoch)
}
