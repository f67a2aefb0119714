use std::io::BufRead;

use serde::{Deserialize, Serialize};

use super::tle::{parse_tle_file, TleRecord};
use crate::error::{Error, Result};

/// Cannonball reflectance parameters of a resident space object.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RsoPhysical {
    /// Effective sphere radius in metres.
    pub radius_m: f64,
    /// Geometric albedo, `(0, 1]`.
    pub albedo: f64,
    /// Diffuse fraction of the phase function, `[0, 1]`.
    pub diffusion: f64,
}

impl Default for RsoPhysical {
    fn default() -> Self {
        RsoPhysical {
            radius_m: 1.0,
            albedo: 0.2,
            diffusion: 0.5,
        }
    }
}

impl RsoPhysical {
    pub fn validate(&self) -> Result<()> {
        if !(self.radius_m > 0.0 && self.radius_m.is_finite()) {
            return Err(Error::range("RSO radius (m)", self.radius_m));
        }
        if !(self.albedo > 0.0 && self.albedo <= 1.0) {
            return Err(Error::range("RSO albedo", self.albedo));
        }
        if !(0.0..=1.0).contains(&self.diffusion) {
            return Err(Error::range("RSO diffusion coefficient", self.diffusion));
        }
        Ok(())
    }

    /// Radius of a sphere with the given radar cross-section area.
    pub fn radius_from_cross_section(area_m2: f64) -> f64 {
        (area_m2 / std::f64::consts::PI).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RsoEntry {
    pub tle: TleRecord,
    pub physical: RsoPhysical,
}

impl RsoEntry {
    pub fn new(tle: TleRecord, physical: RsoPhysical) -> Result<Self> {
        physical.validate()?;
        Ok(RsoEntry { tle, physical })
    }

    pub fn radius_m(&self) -> f64 {
        self.physical.radius_m
    }

    pub fn albedo(&self) -> f64 {
        self.physical.albedo
    }

    pub fn diffusion(&self) -> f64 {
        self.physical.diffusion
    }
}

/// Reads a TLE file and attaches the same physical parameters to every object.
pub fn parse_rso_catalog<R: BufRead>(reader: R, physical: RsoPhysical) -> Result<Vec<RsoEntry>> {
    parse_tle_file(reader)?
        .into_iter()
        .map(|tle| RsoEntry::new(tle, physical))
        .collect()
}
