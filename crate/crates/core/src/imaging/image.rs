use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

/// 8-bit grayscale raster, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidArgument("image dimensions must be positive".into()));
        }
        if pixels.len() != width * height {
            return Err(Error::InvalidArgument(format!(
                "{} pixels given for a {width}x{height} image",
                pixels.len()
            )));
        }
        Ok(Self { width, height, pixels })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn pixels_mut(&mut self) -> &mut [u8] {
        &mut self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, v: u8) {
        self.pixels[y * self.width + x] = v;
    }

    /// Pixels scaled to [0, 1].
    pub fn to_float(&self) -> Vec<f64> {
        self.pixels.iter().map(|&p| p as f64 / 255.0).collect()
    }

    pub fn same_dims(&self, other: &GrayImage) -> Result<()> {
        if self.width != other.width || self.height != other.height {
            return Err(Error::DimensionMismatch(self.width, self.height, other.width, other.height));
        }
        Ok(())
    }

    /// Binary PGM (P5, maxval 255).
    pub fn to_pgm_bytes(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }

    pub fn from_pgm_bytes(data: &[u8]) -> Result<Self> {
        let mut pos = 0usize;
        let magic = next_token(data, &mut pos)?;
        if magic != b"P5" {
            return Err(Error::Pgm(format!(
                "unsupported magic '{}', expected P5",
                String::from_utf8_lossy(magic)
            )));
        }
        let width = parse_number(next_token(data, &mut pos)?, "width")?;
        let height = parse_number(next_token(data, &mut pos)?, "height")?;
        let maxval = parse_number(next_token(data, &mut pos)?, "maxval")?;
        if maxval != 255 {
            return Err(Error::Pgm(format!("maxval {maxval} unsupported, expected 255")));
        }
        if pos >= data.len() || !data[pos].is_ascii_whitespace() {
            return Err(Error::Pgm("missing whitespace after header".into()));
        }
        pos += 1;
        let need = width
            .checked_mul(height)
            .ok_or_else(|| Error::Pgm("image dimensions overflow".into()))?;
        let body = &data[pos..];
        if body.len() < need {
            return Err(Error::Pgm(format!("expected {need} pixel bytes, found {}", body.len())));
        }
        Self::new(width, height, body[..need].to_vec()).map_err(|e| Error::Pgm(e.to_string()))
    }

    pub fn read_pgm(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_pgm_bytes(&fs::read(path)?)
    }

    pub fn write_pgm(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut f = fs::File::create(path)?;
        f.write_all(&self.to_pgm_bytes())?;
        Ok(())
    }
}

fn next_token<'a>(data: &'a [u8], pos: &mut usize) -> Result<&'a [u8]> {
    loop {
        while *pos < data.len() && data[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos < data.len() && data[*pos] == b'#' {
            while *pos < data.len() && data[*pos] != b'\n' {
                *pos += 1;
            }
            continue;
        }
        break;
    }
    let start = *pos;
    while *pos < data.len() && !data[*pos].is_ascii_whitespace() && data[*pos] != b'#' {
        *pos += 1;
    }
    if start == *pos {
        return Err(Error::Pgm("truncated header".into()));
    }
    Ok(&data[start..*pos])
}

fn parse_number(tok: &[u8], what: &str) -> Result<usize> {
    std::str::from_utf8(tok)
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|v| *v > 0)
        .ok_or_else(|| Error::Pgm(format!("invalid {what} '{}'", String::from_utf8_lossy(tok))))
}
