use std::f64::consts::{FRAC_PI_2, TAU};
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A catalogue star: astrometric position and visual magnitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StarEntry {
    pub id: u64,
    /// Right ascension in radians, `[0, 2π)`.
    pub ra: f64,
    /// Declination in radians, `[-π/2, π/2]`.
    pub dec: f64,
    pub magnitude: f64,
}

impl StarEntry {
    pub fn new(id: u64, ra: f64, dec: f64, magnitude: f64) -> Result<Self> {
        if !ra.is_finite() {
            return Err(Error::range("right ascension", ra));
        }
        if !(-FRAC_PI_2..=FRAC_PI_2).contains(&dec) {
            return Err(Error::range("declination", dec));
        }
        if !magnitude.is_finite() {
            return Err(Error::range("magnitude", magnitude));
        }
        Ok(StarEntry {
            id,
            ra: ra.rem_euclid(TAU),
            dec,
            magnitude,
        })
    }
}

/// Reads the whitespace-separated `id ra_deg dec_deg magnitude` format.
/// Blank lines and lines starting with `#` are skipped.
pub fn parse_star_catalog<R: BufRead>(reader: R) -> Result<Vec<StarEntry>> {
    let mut stars = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::Parse {
            line: lineno,
            message: e.to_string(),
        })?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let bad = |message: String| Error::Parse {
            line: lineno,
            message,
        };
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(bad(format!("expected 4 columns, found {}", fields.len())));
        }
        let id: u64 = fields[0]
            .parse()
            .map_err(|_| bad(format!("invalid star id {:?}", fields[0])))?;
        let mut nums = [0.0f64; 3];
        for (slot, field) in nums.iter_mut().zip(&fields[1..]) {
            *slot = field
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| bad(format!("invalid number {field:?}")))?;
        }
        let [ra_deg, dec_deg, magnitude] = nums;
        if !(-90.0..=90.0).contains(&dec_deg) {
            return Err(Error::Range {
                what: format!("declination on line {lineno}"),
                value: dec_deg,
            });
        }
        stars.push(StarEntry::new(
            id,
            ra_deg.to_radians(),
            dec_deg.to_radians(),
            magnitude,
        )?);
    }
    Ok(stars)
}

pub fn write_star_catalog<W: Write>(mut out: W, stars: &[StarEntry]) -> std::io::Result<()> {
    writeln!(out, "# id ra_deg dec_deg magnitude")?;
    for s in stars {
        writeln!(
            out,
            "{} {:.6} {:.6} {:.2}",
            s.id,
            s.ra.to_degrees(),
            s.dec.to_degrees(),
            s.magnitude
        )?;
    }
    Ok(())
}

/// Keeps stars at or brighter than `magnitude_limit`, in input order.
pub fn filter_visible(entries: &[StarEntry], magnitude_limit: f64) -> Vec<StarEntry> {
    entries
        .iter()
        .filter(|s| s.magnitude <= magnitude_limit)
        .copied()
        .collect()
}
