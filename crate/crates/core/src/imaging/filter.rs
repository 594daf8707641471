use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lestimator::LEstimator;

use super::image::GrayImage;
use super::noise::quantize;

/// Border handling for windows that extend past the image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Padding {
    /// Mirror about the edge pixel without repeating it: `-1 -> 1`.
    #[default]
    Reflect,
    /// Repeat the edge pixel.
    Replicate,
}

impl Padding {
    fn index(self, i: isize, len: usize) -> usize {
        let n = len as isize;
        match self {
            Padding::Replicate => i.clamp(0, n - 1) as usize,
            Padding::Reflect => {
                if len == 1 {
                    return 0;
                }
                let period = 2 * (n - 1);
                let m = i.rem_euclid(period);
                (if m >= n { period - m } else { m }) as usize
            }
        }
    }
}

/// Applies `filter` over every `w x w` neighbourhood; `w` must be odd and
/// `w * w` must equal the filter length. Rows are processed in parallel.
pub fn denoise(img: &GrayImage, filter: &LEstimator, w: usize, padding: Padding) -> Result<GrayImage> {
    if w == 0 || w % 2 == 0 {
        return Err(Error::InvalidArgument(format!("window side w={w} must be odd")));
    }
    if w * w != filter.n() {
        return Err(Error::LengthMismatch {
            expected: filter.n(),
            got: w * w,
        });
    }
    let (width, height) = (img.width(), img.height());
    let half = (w / 2) as isize;
    let src = img.pixels();
    let cols: Vec<Vec<usize>> = (0..width)
        .map(|x| {
            (-half..=half)
                .map(|d| padding.index(x as isize + d, width))
                .collect()
        })
        .collect();
    let mut out = vec![0u8; width * height];
    out.par_chunks_mut(width).enumerate().for_each(|(y, row)| {
        let rows: Vec<usize> = (-half..=half)
            .map(|d| padding.index(y as isize + d, height))
            .collect();
        let mut window = vec![0.0f64; w * w];
        for (x, px) in row.iter_mut().enumerate() {
            let mut k = 0;
            for &ry in &rows {
                let base = ry * width;
                for &cx in &cols[x] {
                    window[k] = src[base + cx] as f64;
                    k += 1;
                }
            }
            *px = quantize(filter.apply_in_place(&mut window));
        }
    });
    GrayImage::new(width, height, out)
}
