//! Absolute time as UTC seconds since J2000 (2000-01-01T12:00:00Z).
//!
//! Leap seconds are ignored; sub-second offsets are irrelevant for streak
//! geometry at star-tracker resolution.

use std::fmt;
use std::ops::{Add, Sub};
use std::str::FromStr;

use chrono::{DateTime, Datelike, NaiveDate, SecondsFormat, TimeZone, Utc};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const SECONDS_PER_DAY: f64 = 86_400.0;
const J2000_JULIAN_DATE: f64 = 2_451_545.0;

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Epoch(f64);

impl Epoch {
    pub const J2000: Epoch = Epoch(0.0);

    pub fn from_j2000_seconds(seconds: f64) -> Self {
        Epoch(seconds)
    }

    pub fn j2000_seconds(self) -> f64 {
        self.0
    }

    fn j2000_utc() -> DateTime<Utc> {
        Utc.with_ymd_and_hms(2000, 1, 1, 12, 0, 0).unwrap()
    }

    pub fn from_utc(t: DateTime<Utc>) -> Self {
        let delta = t - Self::j2000_utc();
        let micros = delta
            .num_microseconds()
            .expect("epoch within a few centuries of J2000");
        Epoch(micros as f64 * 1e-6)
    }

    pub fn to_utc(self) -> DateTime<Utc> {
        let micros = (self.0 * 1e6).round() as i64;
        Self::j2000_utc() + chrono::Duration::microseconds(micros)
    }

    /// Builds an epoch from a full year and a 1-based fractional day of year,
    /// as encoded in two-line element sets.
    pub fn from_year_and_day(year: i32, day_of_year: f64) -> Result<Self> {
        if !(1.0..367.0).contains(&day_of_year) {
            return Err(Error::range("day of year", day_of_year));
        }
        let jan1 = NaiveDate::from_ymd_opt(year, 1, 1)
            .ok_or_else(|| Error::range("year", year as f64))?
            .and_hms_opt(0, 0, 0)
            .unwrap()
            .and_utc();
        Ok(Epoch::from_utc(jan1) + (day_of_year - 1.0) * SECONDS_PER_DAY)
    }

    /// Inverse of [`Epoch::from_year_and_day`].
    pub fn year_and_day(self) -> (i32, f64) {
        let year = self.to_utc().year();
        let jan1 = NaiveDate::from_ymd_opt(year, 1, 1)
            .unwrap()
            .and_hms_opt(0, 0, 0)
            .unwrap()
            .and_utc();
        let day = (self - Epoch::from_utc(jan1)) / SECONDS_PER_DAY + 1.0;
        (year, day)
    }

    pub fn julian_date(self) -> f64 {
        J2000_JULIAN_DATE + self.0 / SECONDS_PER_DAY
    }
}

impl Add<f64> for Epoch {
    type Output = Epoch;
    fn add(self, seconds: f64) -> Epoch {
        Epoch(self.0 + seconds)
    }
}

impl Sub<f64> for Epoch {
    type Output = Epoch;
    fn sub(self, seconds: f64) -> Epoch {
        Epoch(self.0 - seconds)
    }
}

/// Difference in seconds.
impl Sub for Epoch {
    type Output = f64;
    fn sub(self, other: Epoch) -> f64 {
        self.0 - other.0
    }
}

impl fmt::Display for Epoch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_utc().to_rfc3339_opts(SecondsFormat::Millis, true))
    }
}

impl FromStr for Epoch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DateTime::parse_from_rfc3339(s.trim())
            .map(|t| Epoch::from_utc(t.with_timezone(&Utc)))
            .map_err(|e| Error::Config(format!("invalid timestamp {s:?}: {e}")))
    }
}

impl Serialize for Epoch {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Epoch {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
