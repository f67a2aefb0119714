//! Synthetic catalogues for tests and bundled sample data.

use std::f64::consts::TAU;
use std::io::Write;

use rand::Rng;

use crate::catalog::{parse_tle, StarEntry, TleRecord};
use crate::error::Result;
use crate::rng::stream_rng;
use crate::time::Epoch;

/// Isotropic star field whose counts grow by ~10^0.5 per magnitude,
/// faintest star at `faintest_magnitude`, none brighter than -1.5.
pub fn synthetic_star_catalog(count: usize, faintest_magnitude: f64, seed: u64) -> Vec<StarEntry> {
    let mut rng = stream_rng(seed, 0);
    (0..count)
        .map(|i| {
            let ra = rng.random::<f64>() * TAU;
            let dec = (2.0 * rng.random::<f64>() - 1.0).asin();
            let u = 1.0 - rng.random::<f64>();
            let mag = (faintest_magnitude + 2.0 * u.log10()).max(-1.5);
            let mag = (mag * 100.0).round() / 100.0;
            StarEntry::new(i as u64 + 1, ra, dec, mag).expect("generated star is in range")
        })
        .collect()
}

/// Classical orbital elements in TLE units (degrees, rev/day).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitElements {
    pub inclination_deg: f64,
    pub raan_deg: f64,
    pub eccentricity: f64,
    pub arg_perigee_deg: f64,
    pub mean_anomaly_deg: f64,
    pub mean_motion_rev_day: f64,
}

/// Encodes elements as a TLE and parses it back, so the record carries
/// exactly the precision and checksums of its text form.
pub fn synthetic_tle(
    norad_id: u32,
    name: &str,
    epoch: Epoch,
    el: &OrbitElements,
) -> Result<TleRecord> {
    let draft = TleRecord {
        name: name.to_string(),
        norad_id,
        classification: 'U',
        international_designator: format!("{:02}{:03}A", 20, norad_id % 1000),
        epoch,
        mean_motion_dot: 0.0,
        mean_motion_ddot: 0.0,
        bstar: 0.0,
        ephemeris_type: 0,
        element_set_number: 999,
        inclination: el.inclination_deg.to_radians(),
        raan: el.raan_deg.to_radians(),
        eccentricity: el.eccentricity,
        arg_perigee: el.arg_perigee_deg.to_radians(),
        mean_anomaly: el.mean_anomaly_deg.to_radians(),
        mean_motion: el.mean_motion_rev_day,
        revolution_number: 1,
        line1_checksum: 0,
        line2_checksum: 0,
    };
    let (l1, l2) = draft.to_lines();
    Ok(parse_tle(name, &l1, &l2)?)
}

/// Low-Earth-orbit population with catalogue numbers from `first_id`.
pub fn synthetic_rso_population(
    count: usize,
    first_id: u32,
    epoch: Epoch,
    seed: u64,
) -> Result<Vec<TleRecord>> {
    let mut rng = stream_rng(seed, 1);
    (0..count)
        .map(|i| {
            let el = OrbitElements {
                inclination_deg: rng.random_range(0.0..110.0),
                raan_deg: rng.random_range(0.0..360.0),
                eccentricity: rng.random_range(0.0..0.02),
                arg_perigee_deg: rng.random_range(0.0..360.0),
                mean_anomaly_deg: rng.random_range(0.0..360.0),
                mean_motion_rev_day: rng.random_range(11.0..15.8),
            };
            let id = first_id + i as u32;
            synthetic_tle(id, &format!("OBJECT {id}"), epoch, &el)
        })
        .collect()
}

/// Writes three-line element sets (name line, then the two data lines).
pub fn write_tle_file<W: Write>(mut out: W, records: &[TleRecord]) -> std::io::Result<()> {
    for r in records {
        let (l1, l2) = r.to_lines();
        writeln!(out, "{}\n{l1}\n{l2}", r.name)?;
    }
    Ok(())
}
