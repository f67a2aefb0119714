//! Binary PGM (`P5`) images. 16-bit samples are big-endian.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage16 {
    pub width: u32,
    pub height: u32,
    pub data: Vec<u16>,
}

impl GrayImage16 {
    pub fn new(width: u32, height: u32, data: Vec<u16>) -> Result<Self> {
        if data.len() != width as usize * height as usize {
            return Err(Error::Format(format!(
                "raster has {} samples, expected {width}x{height}",
                data.len()
            )));
        }
        Ok(GrayImage16 {
            width,
            height,
            data,
        })
    }

    #[inline]
    pub fn get(&self, col: u32, row: u32) -> u16 {
        self.data[row as usize * self.width as usize + col as usize]
    }
}

pub fn encode_pgm16(img: &GrayImage16) -> Vec<u8> {
    let header = format!("P5\n{} {}\n65535\n", img.width, img.height);
    let mut out = Vec::with_capacity(header.len() + 2 * img.data.len());
    out.extend_from_slice(header.as_bytes());
    for v in &img.data {
        out.extend_from_slice(&v.to_be_bytes());
    }
    out
}

/// 8-bit view scaled so the brightest pixel maps to 255.
pub fn encode_pgm8_preview(img: &GrayImage16) -> Vec<u8> {
    let max = img.data.iter().copied().max().unwrap_or(0).max(1) as f64;
    let header = format!("P5\n{} {}\n255\n", img.width, img.height);
    let mut out = header.into_bytes();
    out.extend(
        img.data
            .iter()
            .map(|&v| (v as f64 * 255.0 / max).round() as u8),
    );
    out
}

struct HeaderReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl HeaderReader<'_> {
    fn skip_space_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                b if b.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn token(&mut self) -> Result<&str> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Format("truncated PGM header".into()));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .map_err(|_| Error::Format("bad PGM header".into()))
    }

    fn number(&mut self) -> Result<u32> {
        let t = self.token()?;
        t.parse()
            .map_err(|_| Error::Format(format!("invalid PGM header value {t:?}")))
    }
}

/// Decodes 8- or 16-bit binary PGM.
pub fn decode_pgm(bytes: &[u8]) -> Result<GrayImage16> {
    let mut r = HeaderReader { bytes, pos: 0 };
    if r.token()? != "P5" {
        return Err(Error::Format("not a binary PGM (expected P5)".into()));
    }
    let width = r.number()?;
    let height = r.number()?;
    let maxval = r.number()?;
    if maxval == 0 || maxval > 65_535 {
        return Err(Error::Format(format!("invalid PGM maxval {maxval}")));
    }
    // Exactly one whitespace byte separates the header from the raster.
    let start = r.pos + 1;
    let n = width as usize * height as usize;
    let wide = maxval > 255;
    let need = if wide { 2 * n } else { n };
    let body = bytes
        .get(start..)
        .filter(|b| b.len() >= need)
        .ok_or_else(|| Error::Format(format!("PGM raster truncated: need {need} bytes")))?;
    let data = if wide {
        body[..need]
            .chunks_exact(2)
            .map(|c| u16::from_be_bytes([c[0], c[1]]))
            .collect()
    } else {
        body[..need].iter().map(|&b| u16::from(b)).collect()
    };
    GrayImage16::new(width, height, data)
}

pub fn write_pgm16(path: &Path, img: &GrayImage16) -> Result<()> {
    fs::write(path, encode_pgm16(img)).map_err(|e| Error::io(path, e))
}

pub fn read_pgm(path: &Path) -> Result<GrayImage16> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_pgm(&bytes).map_err(|e| match e {
        Error::Format(msg) => Error::Format(format!("{}: {msg}", path.display())),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn swarm_sized_file_length() {
        let img = GrayImage16::new(768, 576, vec![7; 768 * 576]).unwrap();
        let bytes = encode_pgm16(&img);
        let header = "P5\n768 576\n65535\n".len();
        assert_eq!(bytes.len(), header + 2 * 576 * 768);
    }

    #[test]
    fn big_endian_samples() {
        let img = GrayImage16::new(2, 1, vec![0x0102, 0xFFFE]).unwrap();
        let bytes = encode_pgm16(&img);
        assert_eq!(&bytes[bytes.len() - 4..], &[0x01, 0x02, 0xFF, 0xFE]);
    }

    #[test]
    fn eight_bit_and_comments() {
        let mut bytes = b"P5\n# a comment\n3 1\n255\n".to_vec();
        bytes.extend([1u8, 2, 255]);
        let img = decode_pgm(&bytes).unwrap();
        assert_eq!(img.data, vec![1, 2, 255]);
    }

    #[test]
    fn rejects_garbage() {
        assert!(decode_pgm(b"P2\n1 1\n255\n0").is_err());
        assert!(decode_pgm(b"P5\n4 4\n65535\n\x00\x01").is_err());
    }

    #[test]
    fn preview_scales_to_255() {
        let img = GrayImage16::new(2, 1, vec![500, 1000]).unwrap();
        let img8 = decode_pgm(&encode_pgm8_preview(&img)).unwrap();
        assert_eq!(img8.data, vec![128, 255]);
    }

    proptest! {
        #[test]
        fn round_trip(w in 1u32..20, h in 1u32..20, seed in any::<u64>()) {
            let data: Vec<u16> = (0..w * h).map(|i| (seed.wrapping_mul(i as u64 + 1) >> 17) as u16).collect();
            let img = GrayImage16::new(w, h, data).unwrap();
            prop_assert_eq!(decode_pgm(&encode_pgm16(&img)).unwrap(), img);
        }
    }
}
