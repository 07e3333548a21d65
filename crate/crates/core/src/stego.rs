// SPDX-License-Identifier: Apache-2.0
//! LSB steganography on 8-bit grayscale images.
//!
//! The payload is prefixed with its length in bits as a 32-bit big-endian
//! header, and header plus payload are written one bit per pixel into the
//! pixel LSBs, row-major from the top-left pixel.

use std::fmt::Write as _;

pub const HEADER_BITS: usize = 32;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum StegoError {
    #[error("payload of {payload} bits plus {HEADER_BITS}-bit header exceeds capacity of {capacity} pixels")]
    Capacity { payload: usize, capacity: usize },
    #[error("header claims {claimed} payload bits but only {available} fit")]
    CorruptPayload { claimed: u64, available: usize },
    #[error("image has {0} pixels, fewer than a header")]
    TooSmall(usize),
    #[error("images differ in size: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("not a binary PGM: {0}")]
    Format(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self, StegoError> {
        if width == 0 || height == 0 || pixels.len() != width * height {
            return Err(StegoError::Format(format!("{} pixels for {width}x{height}", pixels.len())));
        }
        Ok(Self { width, height, pixels })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        Self::new(width, height, vec![value; width * height]).expect("positive size")
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    /// Payload bits that fit after the header.
    pub fn capacity(&self) -> usize {
        self.pixels.len().saturating_sub(HEADER_BITS)
    }

    /// Parses binary PGM (`P5`, maxval 255), including `#` comments.
    pub fn from_pgm(data: &[u8]) -> Result<Self, StegoError> {
        let mut pos = 0;
        let mut fields = Vec::with_capacity(4);
        while fields.len() < 4 {
            while pos < data.len() && (data[pos].is_ascii_whitespace() || data[pos] == b'#') {
                if data[pos] == b'#' {
                    while pos < data.len() && data[pos] != b'\n' {
                        pos += 1;
                    }
                } else {
                    pos += 1;
                }
            }
            let start = pos;
            while pos < data.len() && !data[pos].is_ascii_whitespace() && data[pos] != b'#' {
                pos += 1;
            }
            if start == pos {
                return Err(StegoError::Format("truncated header".into()));
            }
            fields.push(String::from_utf8_lossy(&data[start..pos]).into_owned());
        }
        if fields[0] != "P5" {
            return Err(StegoError::Format(format!("magic `{}`", fields[0])));
        }
        let num = |s: &str| s.parse::<usize>().map_err(|_| StegoError::Format(format!("bad number `{s}`")));
        let (w, h, maxval) = (num(&fields[1])?, num(&fields[2])?, num(&fields[3])?);
        if maxval != 255 {
            return Err(StegoError::Format(format!("maxval {maxval}, need 255")));
        }
        // Exactly one whitespace byte separates the header from the raster.
        pos += 1;
        let end = pos + w * h;
        if data.len() < end {
            return Err(StegoError::Format("raster shorter than header says".into()));
        }
        Self::new(w, h, data[pos..end].to_vec())
    }

    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }
}

/// Hides `payload` behind its length header.
pub fn embed_lsb(image: &GrayImage, payload: &[bool]) -> Result<GrayImage, StegoError> {
    let capacity = image.pixels.len();
    if payload.len() + HEADER_BITS > capacity || payload.len() > u32::MAX as usize {
        return Err(StegoError::Capacity { payload: payload.len(), capacity });
    }
    let len = payload.len() as u32;
    let header = (0..HEADER_BITS).map(|i| len >> (31 - i) & 1 == 1);
    let mut out = image.clone();
    for (px, bit) in out.pixels.iter_mut().zip(header.chain(payload.iter().copied())) {
        *px = (*px & !1) | bit as u8;
    }
    Ok(out)
}

/// Reads the header and the payload it announces.
pub fn extract_lsb(image: &GrayImage) -> Result<Vec<bool>, StegoError> {
    let px = &image.pixels;
    if px.len() < HEADER_BITS {
        return Err(StegoError::TooSmall(px.len()));
    }
    let len = px[..HEADER_BITS].iter().fold(0u64, |acc, &p| acc << 1 | (p & 1) as u64);
    let available = px.len() - HEADER_BITS;
    if len > available as u64 {
        return Err(StegoError::CorruptPayload { claimed: len, available });
    }
    Ok(px[HEADER_BITS..HEADER_BITS + len as usize].iter().map(|&p| p & 1 == 1).collect())
}

/// Peak signal-to-noise ratio in dB; infinite for identical images.
pub fn psnr(a: &GrayImage, b: &GrayImage) -> Result<f64, StegoError> {
    if a.width != b.width || a.height != b.height {
        return Err(StegoError::DimensionMismatch(a.width, a.height, b.width, b.height));
    }
    let sse: u64 = a
        .pixels
        .iter()
        .zip(&b.pixels)
        .map(|(&x, &y)| {
            let d = x as i64 - y as i64;
            (d * d) as u64
        })
        .sum();
    if sse == 0 {
        return Ok(f64::INFINITY);
    }
    let mse = sse as f64 / a.pixels.len() as f64;
    Ok(10.0 * (255.0f64 * 255.0 / mse).log10())
}

pub fn histogram(image: &GrayImage) -> [u64; 256] {
    let mut h = [0u64; 256];
    for &p in &image.pixels {
        h[p as usize] += 1;
    }
    h
}

/// `bin,count` rows for all 256 bins.
pub fn histogram_csv(hist: &[u64; 256]) -> String {
    let mut s = String::from("bin,count\n");
    for (bin, count) in hist.iter().enumerate() {
        let _ = writeln!(s, "{bin},{count}");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gradient(w: usize, h: usize) -> GrayImage {
        let px = (0..w * h).map(|i| (i * 7 % 256) as u8).collect();
        GrayImage::new(w, h, px).unwrap()
    }

    #[test]
    fn round_trip_and_capacity() {
        let img = gradient(16, 16);
        let payload: Vec<bool> = (0..img.capacity()).map(|i| i % 3 == 0).collect();
        let st = embed_lsb(&img, &payload).unwrap();
        assert_eq!(extract_lsb(&st).unwrap(), payload);
        assert!(embed_lsb(&img, &vec![false; img.capacity() + 1]).is_err());
        let empty = embed_lsb(&img, &[]).unwrap();
        assert!(extract_lsb(&empty).unwrap().is_empty());
    }

    #[test]
    fn corrupt_header() {
        let img = GrayImage::filled(8, 8, 1);
        assert!(matches!(extract_lsb(&img), Err(StegoError::CorruptPayload { .. })));
        assert!(matches!(extract_lsb(&GrayImage::filled(4, 4, 0)), Err(StegoError::TooSmall(16))));
    }

    #[test]
    fn psnr_values() {
        let a = GrayImage::filled(256, 256, 100);
        assert_eq!(psnr(&a, &a).unwrap(), f64::INFINITY);
        let mut px = a.pixels().to_vec();
        px[5] = 101;
        let b = GrayImage::new(256, 256, px).unwrap();
        assert!((psnr(&a, &b).unwrap() - 96.3).abs() < 0.01);
        let z = GrayImage::filled(4, 4, 0);
        let f = GrayImage::filled(4, 4, 255);
        assert!(psnr(&z, &f).unwrap().abs() < 1e-12);
        assert!(psnr(&z, &a).is_err());
    }

    #[test]
    fn pgm_round_trip() {
        let img = gradient(5, 3);
        assert_eq!(GrayImage::from_pgm(&img.to_pgm()).unwrap(), img);
        let with_comment = b"P5\n# made by hand\n2 1\n255\n\x01\x02";
        let img = GrayImage::from_pgm(with_comment).unwrap();
        assert_eq!(img.pixels(), &[1, 2]);
        assert!(GrayImage::from_pgm(b"P2\n1 1\n255\n0").is_err());
        assert!(GrayImage::from_pgm(b"P5\n2 2\n255\n\x00").is_err());
    }

    #[test]
    fn histogram_mid_gray() {
        let h = histogram(&GrayImage::filled(10, 10, 128));
        assert_eq!(h[128], 100);
        assert_eq!(h.iter().sum::<u64>(), 100);
        assert!(histogram_csv(&h).starts_with("bin,count\n0,0\n"));
    }
}
