//! Binary Netpbm images: P5 (grayscale) and P6 (RGB), 8 bits per sample.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PnmKind {
    /// P5
    Gray,
    /// P6
    Color,
}

impl PnmKind {
    pub fn channels(self) -> usize {
        match self {
            PnmKind::Gray => 1,
            PnmKind::Color => 3,
        }
    }

    fn magic(self) -> &'static [u8; 2] {
        match self {
            PnmKind::Gray => b"P5",
            PnmKind::Color => b"P6",
        }
    }
}

/// Row-major samples; color images interleave R, G, B per pixel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PnmImage {
    pub kind: PnmKind,
    pub width: usize,
    pub height: usize,
    pub samples: Vec<u8>,
}

impl PnmImage {
    pub fn new(kind: PnmKind, width: usize, height: usize, samples: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Format("image must be at least 1x1".into()));
        }
        let expected = width * height * kind.channels();
        if samples.len() != expected {
            return Err(Error::Format(format!(
                "{} samples for a {width}x{height} image with {} channel(s), expected {expected}",
                samples.len(),
                kind.channels()
            )));
        }
        Ok(Self {
            kind,
            width,
            height,
            samples,
        })
    }
}

struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Header<'_> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Format(format!("missing {what} in PNM header")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| Error::Format(format!("{what} out of range")))
    }
}

pub fn decode_pnm(bytes: &[u8]) -> Result<PnmImage> {
    let kind = match bytes.get(..2) {
        Some(b"P5") => PnmKind::Gray,
        Some(b"P6") => PnmKind::Color,
        _ => return Err(Error::Format("unsupported image: expected binary PGM (P5) or PPM (P6)".into())),
    };
    let mut h = Header { bytes, pos: 2 };
    let width = h.number("width")?;
    let height = h.number("height")?;
    let maxval = h.number("maxval")?;
    if maxval != 255 {
        return Err(Error::Format(format!("maxval {maxval} unsupported, must be 255")));
    }
    // exactly one whitespace byte separates the header from the raster
    match bytes.get(h.pos) {
        Some(b) if b.is_ascii_whitespace() => h.pos += 1,
        _ => return Err(Error::Format("missing whitespace after maxval".into())),
    }
    let expected = width
        .checked_mul(height)
        .and_then(|p| p.checked_mul(kind.channels()))
        .ok_or_else(|| Error::Format("image dimensions overflow".into()))?;
    let raster = &bytes[h.pos..];
    if raster.len() != expected {
        return Err(Error::Format(format!(
            "raster has {} bytes, {width}x{height} needs {expected}",
            raster.len()
        )));
    }
    PnmImage::new(kind, width, height, raster.to_vec())
}

pub fn encode_pnm(img: &PnmImage) -> Vec<u8> {
    let header = format!("{}\n{} {}\n255\n", std::str::from_utf8(img.kind.magic()).unwrap(), img.width, img.height);
    let mut out = Vec::with_capacity(header.len() + img.samples.len());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(&img.samples);
    out
}

pub fn load_pnm(path: impl AsRef<Path>) -> Result<PnmImage> {
    decode_pnm(&fs::read(path)?)
}

pub fn save_pnm(path: impl AsRef<Path>, img: &PnmImage) -> Result<()> {
    fs::write(path, encode_pnm(img))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_header_with_comments() {
        let mut bytes = b"P5 # a comment\n# another\n3 2\n255\n".to_vec();
        bytes.extend([0, 1, 2, 253, 254, 255]);
        let img = decode_pnm(&bytes).unwrap();
        assert_eq!((img.kind, img.width, img.height), (PnmKind::Gray, 3, 2));
        assert_eq!(img.samples, vec![0, 1, 2, 253, 254, 255]);
    }

    #[test]
    fn raster_starting_with_whitespace_byte() {
        // first sample is 10 (newline), must not be eaten by the header
        let mut bytes = b"P5\n2 1\n255\n".to_vec();
        bytes.extend([b'\n', 7]);
        assert_eq!(decode_pnm(&bytes).unwrap().samples, vec![10, 7]);
    }

    #[test]
    fn encode_is_canonical() {
        let img = PnmImage::new(PnmKind::Color, 1, 2, vec![1, 2, 3, 4, 5, 6]).unwrap();
        let bytes = encode_pnm(&img);
        assert_eq!(&bytes[..11], b"P6\n1 2\n255\n");
        assert_eq!(decode_pnm(&bytes).unwrap(), img);
    }

    #[test]
    fn rejects_unsupported_inputs() {
        assert!(decode_pnm(b"P2\n1 1\n255\n0").is_err());
        assert!(decode_pnm(b"P5\n1 1\n65535\n\0\0").is_err());
        assert!(decode_pnm(b"P5\n2 2\n255\n\0\0\0").is_err());
        assert!(decode_pnm(b"P5\n2 2\n255\n\0\0\0\0\0").is_err());
        assert!(decode_pnm(b"P6\n1\n").is_err());
        assert!(PnmImage::new(PnmKind::Gray, 0, 1, vec![]).is_err());
    }
}
