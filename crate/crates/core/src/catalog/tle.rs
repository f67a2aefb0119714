//! Two-line element sets.
//!
//! Column positions follow the public NORAD convention. Only numeric
//! catalogue numbers are accepted (no Alpha-5).

use std::io::BufRead;

use crate::error::{Error, Result, TleError};
use crate::time::Epoch;

pub const TLE_LINE_LEN: usize = 69;

#[derive(Debug, Clone, PartialEq)]
pub struct TleRecord {
    pub name: String,
    pub norad_id: u32,
    pub classification: char,
    pub international_designator: String,
    pub epoch: Epoch,
    /// First derivative of mean motion / 2, rev/day².
    pub mean_motion_dot: f64,
    /// Second derivative of mean motion / 6, rev/day³.
    pub mean_motion_ddot: f64,
    /// Drag term. Stored but not used by the two-body propagator.
    pub bstar: f64,
    pub ephemeris_type: u8,
    pub element_set_number: u16,
    pub inclination: f64,
    pub raan: f64,
    pub eccentricity: f64,
    pub arg_perigee: f64,
    pub mean_anomaly: f64,
    /// Revolutions per day.
    pub mean_motion: f64,
    pub revolution_number: u32,
    pub line1_checksum: u8,
    pub line2_checksum: u8,
}

/// Mod-10 checksum over the first 68 characters: digits count their face
/// value, `-` counts one, everything else zero.
pub fn checksum(line: &str) -> u8 {
    let sum: u32 = line
        .bytes()
        .take(TLE_LINE_LEN - 1)
        .map(|b| match b {
            b'0'..=b'9' => u32::from(b - b'0'),
            b'-' => 1,
            _ => 0,
        })
        .sum();
    (sum % 10) as u8
}

fn format_err(msg: impl Into<String>) -> TleError {
    TleError::Format(msg.into())
}

fn check_line(line: &str, number: u8) -> Result<(), TleError> {
    if !line.is_ascii() {
        return Err(format_err(format!(
            "line {number} contains non-ASCII characters"
        )));
    }
    if line.len() != TLE_LINE_LEN {
        return Err(format_err(format!(
            "line {number} has {} characters, expected {TLE_LINE_LEN}",
            line.len()
        )));
    }
    let prefix = [b'0' + number, b' '];
    if line.as_bytes()[..2] != prefix {
        return Err(format_err(format!(
            "line {number} must start with {:?}",
            std::str::from_utf8(&prefix).unwrap()
        )));
    }
    let found = line.as_bytes()[TLE_LINE_LEN - 1];
    if !found.is_ascii_digit() {
        return Err(format_err(format!(
            "line {number} checksum column is not a digit"
        )));
    }
    let found = found - b'0';
    let expected = checksum(line);
    if expected != found {
        return Err(TleError::Checksum {
            line: number,
            expected,
            found,
        });
    }
    Ok(())
}

/// 1-based inclusive column range.
fn field(line: &str, first: usize, last: usize) -> &str {
    &line[first - 1..last]
}

fn number<T: std::str::FromStr>(
    line: &str,
    first: usize,
    last: usize,
    what: &str,
) -> Result<T, TleError> {
    let raw = field(line, first, last).trim();
    raw.parse()
        .map_err(|_| format_err(format!("invalid {what} {raw:?}")))
}

/// Decodes the compact exponent notation, e.g. ` 33518-4` = 0.33518e-4.
fn parse_exponent_field(raw: &str, what: &str) -> Result<f64, TleError> {
    let bad = || format_err(format!("invalid {what} {raw:?}"));
    let raw = raw.trim();
    if raw.is_empty() {
        return Ok(0.0);
    }
    let (sign, rest) = match raw.as_bytes()[0] {
        b'-' => (-1.0, &raw[1..]),
        b'+' => (1.0, &raw[1..]),
        _ => (1.0, raw),
    };
    if rest.len() < 3 {
        return Err(bad());
    }
    let (mantissa, exponent) = rest.split_at(rest.len() - 2);
    let mantissa: u32 = mantissa.parse().map_err(|_| bad())?;
    let exponent: i32 = exponent.parse().map_err(|_| bad())?;
    let digits = rest.len() as i32 - 2;
    Ok(sign * f64::from(mantissa) * 10f64.powi(exponent - digits))
}

fn format_exponent_field(value: f64) -> String {
    if value == 0.0 {
        return " 00000-0".to_string();
    }
    let sign = if value < 0.0 { '-' } else { ' ' };
    let abs = value.abs();
    let mut exponent = abs.log10().floor() as i32 + 1;
    let mut mantissa = (abs / 10f64.powi(exponent) * 1e5).round() as u32;
    if mantissa >= 100_000 {
        mantissa /= 10;
        exponent += 1;
    }
    let exponent = exponent.clamp(-9, 9);
    let exp_sign = if exponent < 0 { '-' } else { '+' };
    format!("{sign}{mantissa:05}{exp_sign}{}", exponent.abs())
}

fn format_mean_motion_dot(value: f64) -> String {
    let sign = if value < 0.0 { '-' } else { ' ' };
    let digits = format!("{:.8}", value.abs());
    format!("{sign}{}", digits.trim_start_matches('0'))
}

/// Parses one element set. Both lines must be exactly 69 characters with
/// valid checksums and matching catalogue numbers.
pub fn parse_tle(name: &str, line1: &str, line2: &str) -> Result<TleRecord, TleError> {
    let line1 = line1.trim_end_matches(['\r', '\n']);
    let line2 = line2.trim_end_matches(['\r', '\n']);
    check_line(line1, 1)?;
    check_line(line2, 2)?;

    let norad_id: u32 = number(line1, 3, 7, "catalogue number")?;
    let norad_id2: u32 = number(line2, 3, 7, "catalogue number")?;
    if norad_id != norad_id2 {
        return Err(format_err(format!(
            "catalogue numbers differ between lines ({norad_id} vs {norad_id2})"
        )));
    }
    let classification = line1.as_bytes()[7] as char;
    let international_designator = field(line1, 10, 17).trim_end().to_string();

    let yy: i32 = number(line1, 19, 20, "epoch year")?;
    let year = if yy < 57 { 2000 + yy } else { 1900 + yy };
    let day: f64 = number(line1, 21, 32, "epoch day")?;
    let epoch = Epoch::from_year_and_day(year, day)
        .map_err(|e| format_err(format!("invalid epoch: {e}")))?;

    let ndot_raw = field(line1, 34, 43).trim();
    let mean_motion_dot: f64 = ndot_raw
        .replace(" ", "")
        .parse()
        .map_err(|_| format_err(format!("invalid mean motion derivative {ndot_raw:?}")))?;
    let mean_motion_ddot = parse_exponent_field(field(line1, 45, 52), "second derivative")?;
    let bstar = parse_exponent_field(field(line1, 54, 61), "bstar")?;
    let ephemeris_type = match field(line1, 63, 63) {
        " " => 0,
        s => s
            .parse()
            .map_err(|_| format_err(format!("invalid ephemeris type {s:?}")))?,
    };
    let element_set_number: u16 = number(line1, 65, 68, "element set number")?;

    let inclination: f64 = number(line2, 9, 16, "inclination")?;
    let raan: f64 = number(line2, 18, 25, "right ascension of node")?;
    let ecc_raw = field(line2, 27, 33);
    if !ecc_raw.bytes().all(|b| b.is_ascii_digit() || b == b' ') {
        return Err(format_err(format!("invalid eccentricity {ecc_raw:?}")));
    }
    let eccentricity: f64 = format!("0.{}", ecc_raw.replace(' ', "0"))
        .parse()
        .map_err(|_| format_err(format!("invalid eccentricity {ecc_raw:?}")))?;
    let arg_perigee: f64 = number(line2, 35, 42, "argument of perigee")?;
    let mean_anomaly: f64 = number(line2, 44, 51, "mean anomaly")?;
    let mean_motion: f64 = number(line2, 53, 63, "mean motion")?;
    if !(mean_motion > 0.0) {
        return Err(format_err(format!(
            "mean motion must be positive, got {mean_motion}"
        )));
    }
    let revolution_number: u32 = match field(line2, 64, 68).trim() {
        "" => 0,
        s => s
            .parse()
            .map_err(|_| format_err(format!("invalid revolution number {s:?}")))?,
    };

    Ok(TleRecord {
        name: name.trim().to_string(),
        norad_id,
        classification,
        international_designator,
        epoch,
        mean_motion_dot,
        mean_motion_ddot,
        bstar,
        ephemeris_type,
        element_set_number,
        inclination: inclination.to_radians(),
        raan: raan.to_radians(),
        eccentricity,
        arg_perigee: arg_perigee.to_radians(),
        mean_anomaly: mean_anomaly.to_radians(),
        mean_motion,
        revolution_number,
        line1_checksum: checksum(line1),
        line2_checksum: checksum(line2),
    })
}

fn with_checksum(mut body: String) -> String {
    debug_assert_eq!(body.len(), TLE_LINE_LEN - 1, "{body:?}");
    let c = checksum(&body);
    body.push((b'0' + c) as char);
    body
}

fn wrap_degrees(rad: f64) -> f64 {
    let deg = rad.to_degrees().rem_euclid(360.0);
    // 359.99999 rounds to "360.0000" which no longer fits the column.
    if format!("{deg:.4}") == "360.0000" {
        0.0
    } else {
        deg
    }
}

impl TleRecord {
    /// Encodes the record as a pair of 69-character lines with fresh checksums.
    pub fn to_lines(&self) -> (String, String) {
        let (year, day) = self.epoch.year_and_day();
        let line1 = format!(
            "1 {:05}{} {:<8} {:02}{:012.8} {} {} {} {} {:>4}",
            self.norad_id,
            self.classification,
            self.international_designator,
            year.rem_euclid(100),
            day,
            format_mean_motion_dot(self.mean_motion_dot),
            format_exponent_field(self.mean_motion_ddot),
            format_exponent_field(self.bstar),
            self.ephemeris_type,
            self.element_set_number % 10_000,
        );
        let ecc = format!("{:.7}", self.eccentricity);
        let line2 = format!(
            "2 {:05} {:8.4} {:8.4} {} {:8.4} {:8.4} {:11.8}{:>5}",
            self.norad_id,
            self.inclination.to_degrees(),
            wrap_degrees(self.raan),
            &ecc[2..],
            wrap_degrees(self.arg_perigee),
            wrap_degrees(self.mean_anomaly),
            self.mean_motion,
            self.revolution_number % 100_000,
        );
        (with_checksum(line1), with_checksum(line2))
    }

    /// Orbital period in seconds.
    pub fn period_s(&self) -> f64 {
        crate::time::SECONDS_PER_DAY / self.mean_motion
    }
}

/// Reads repeating groups of two data lines, each optionally preceded by a
/// name line (a leading `0 ` on the name line is stripped).
pub fn parse_tle_file<R: BufRead>(reader: R) -> Result<Vec<TleRecord>> {
    let mut lines = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::Parse {
            line: idx + 1,
            message: e.to_string(),
        })?;
        let line = line.trim_end_matches('\r').to_string();
        if !line.trim().is_empty() {
            lines.push((idx + 1, line));
        }
    }

    let mut records = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        let (lineno, ref first) = lines[i];
        let (name, data_start) = if first.starts_with("1 ") {
            (String::new(), i)
        } else {
            let name = first.strip_prefix("0 ").unwrap_or(first).trim().to_string();
            (name, i + 1)
        };
        if data_start + 1 >= lines.len() {
            return Err(Error::TleAt {
                line: lineno,
                source: format_err("incomplete element set at end of file"),
            });
        }
        let (l1no, ref l1) = lines[data_start];
        let (_, ref l2) = lines[data_start + 1];
        let record =
            parse_tle(&name, l1, l2).map_err(|source| Error::TleAt { line: l1no, source })?;
        records.push(record);
        i = data_start + 2;
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    const ISS_1: &str = "1 25544U 98067A   20206.18539600  .00001406  00000-0  33518-4 0  9997";
    const ISS_2: &str = "2 25544  51.6461 339.8014 0001473  94.8340 265.2864 15.49309432236000";

    /// Independent mod-10 sum written against the raw bytes.
    fn oracle_checksum(line: &str) -> u8 {
        let mut total = 0u32;
        for ch in line.chars().take(68) {
            if let Some(d) = ch.to_digit(10) {
                total += d;
            } else if ch == '-' {
                total += 1;
            }
        }
        (total % 10) as u8
    }

    #[test]
    fn fixture_checksums_match_oracle() {
        assert_eq!(oracle_checksum(ISS_1), 7);
        assert_eq!(oracle_checksum(ISS_2), 0);
        assert_eq!(checksum(ISS_1), oracle_checksum(ISS_1));
        assert_eq!(checksum(ISS_2), oracle_checksum(ISS_2));
    }

    #[test]
    fn parses_fixture() {
        let t = parse_tle("ISS (ZARYA)", ISS_1, ISS_2).unwrap();
        assert_eq!(t.norad_id, 25544);
        assert_eq!(t.classification, 'U');
        assert_eq!(t.international_designator, "98067A");
        assert!((t.inclination.to_degrees() - 51.6461).abs() < 1e-10);
        assert!((t.raan.to_degrees() - 339.8014).abs() < 1e-10);
        assert!((t.eccentricity - 0.0001473).abs() < 1e-15);
        assert!((t.mean_motion - 15.493_094_32).abs() < 1e-12);
        assert!((t.bstar - 0.33518e-4).abs() < 1e-15);
        assert!((t.mean_motion_dot - 0.000_014_06).abs() < 1e-15);
        assert_eq!(t.mean_motion_ddot, 0.0);
        assert_eq!(t.revolution_number, 23600);
        assert_eq!(t.element_set_number, 999);
        let (year, day) = t.epoch.year_and_day();
        assert_eq!(year, 2020);
        assert!((day - 206.185_396).abs() < 1e-9);
    }

    #[test]
    fn perturbed_checksum_is_rejected() {
        let mut bad = ISS_1.to_string();
        bad.replace_range(68..69, "3");
        assert_eq!(
            parse_tle("", &bad, ISS_2).unwrap_err(),
            TleError::Checksum {
                line: 1,
                expected: 7,
                found: 3
            }
        );
    }

    #[test]
    fn short_line_is_format_error() {
        let short = &ISS_2[..68];
        assert!(matches!(
            parse_tle("", ISS_1, short),
            Err(TleError::Format(_))
        ));
    }

    #[test]
    fn swapped_lines_are_format_error() {
        assert!(matches!(
            parse_tle("", ISS_2, ISS_1),
            Err(TleError::Format(_))
        ));
    }

    #[test]
    fn exponent_fields() {
        assert_eq!(parse_exponent_field(" 33518-4", "x").unwrap(), 0.33518e-4);
        assert_eq!(parse_exponent_field("-11606-4", "x").unwrap(), -0.11606e-4);
        assert_eq!(parse_exponent_field(" 00000+0", "x").unwrap(), 0.0);
        assert_eq!(format_exponent_field(0.33518e-4), " 33518-4");
        assert_eq!(format_exponent_field(-0.11606e-4), "-11606-4");
        assert_eq!(format_exponent_field(0.0), " 00000-0");
        assert_eq!(format_exponent_field(0.5), " 50000+0");
    }

    #[test]
    fn serialize_reproduces_fixture() {
        let t = parse_tle("", ISS_1, ISS_2).unwrap();
        let (l1, l2) = t.to_lines();
        assert_eq!(l1, ISS_1);
        assert_eq!(l2, ISS_2);
    }

    #[test]
    fn file_with_and_without_names() {
        let text = format!(
            "ISS (ZARYA)\n{ISS_1}\n{ISS_2}\n\n{ISS_1}\n{ISS_2}\n0 THIRD\n{ISS_1}\n{ISS_2}\n"
        );
        let recs = parse_tle_file(text.as_bytes()).unwrap();
        assert_eq!(recs.len(), 3);
        assert_eq!(recs[0].name, "ISS (ZARYA)");
        assert_eq!(recs[1].name, "");
        assert_eq!(recs[2].name, "THIRD");
    }

    #[test]
    fn file_error_carries_line_number() {
        let mut bad = ISS_2.to_string();
        bad.replace_range(68..69, "5");
        let text = format!("X\n{ISS_1}\n{ISS_2}\nY\n{ISS_1}\n{bad}\n");
        match parse_tle_file(text.as_bytes()) {
            Err(Error::TleAt {
                line,
                source: TleError::Checksum { line: 2, .. },
            }) => assert_eq!(line, 5),
            other => panic!("unexpected {other:?}"),
        }
    }
}
