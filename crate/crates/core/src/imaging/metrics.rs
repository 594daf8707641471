use rayon::prelude::*;

use crate::error::Result;
use crate::numeric::KahanSum;

use super::image::GrayImage;

/// Side of the sliding window used by SSIM and IQI.
pub const METRIC_WINDOW: usize = 8;
const C1: f64 = 0.01 * 0.01;
const C2: f64 = 0.03 * 0.03;

/// All four metrics of a pair of images.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quality {
    pub mse: f64,
    pub psnr: f64,
    pub ssim: f64,
    pub iqi: f64,
}

/// Mean squared error on the [0, 1] float view.
pub fn mse(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    a.same_dims(b)?;
    let (fa, fb) = (a.to_float(), b.to_float());
    let w = a.width();
    let rows: Vec<f64> = fa
        .par_chunks(w)
        .zip(fb.par_chunks(w))
        .map(|(ra, rb)| {
            ra.iter()
                .zip(rb)
                .map(|(x, y)| (x - y) * (x - y))
                .collect::<KahanSum>()
                .value()
        })
        .collect();
    Ok(rows.into_iter().collect::<KahanSum>().value() / a.len() as f64)
}

/// 10 log10(1 / mse) with peak value 1; +inf for identical images.
pub fn psnr(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    let e = mse(a, b)?;
    Ok(if e == 0.0 { f64::INFINITY } else { 10.0 * (1.0 / e).log10() })
}

struct WindowStats {
    mx: f64,
    my: f64,
    vx: f64,
    vy: f64,
    cxy: f64,
}

fn window_stats(fa: &[f64], fb: &[f64], width: usize, x0: usize, y0: usize, wx: usize, wy: usize) -> WindowStats {
    let count = (wx * wy) as f64;
    let (mut sx, mut sy) = (0.0, 0.0);
    for y in y0..y0 + wy {
        for x in x0..x0 + wx {
            sx += fa[y * width + x];
            sy += fb[y * width + x];
        }
    }
    let (mx, my) = (sx / count, sy / count);
    let (mut vx, mut vy, mut cxy) = (0.0, 0.0, 0.0);
    for y in y0..y0 + wy {
        for x in x0..x0 + wx {
            let dx = fa[y * width + x] - mx;
            let dy = fb[y * width + x] - my;
            vx += dx * dx;
            vy += dy * dy;
            cxy += dx * dy;
        }
    }
    let norm = if count > 1.0 { count - 1.0 } else { 1.0 };
    WindowStats {
        mx,
        my,
        vx: vx / norm,
        vy: vy / norm,
        cxy: cxy / norm,
    }
}

/// Mean of a per-window statistic over all sliding windows, row-ordered.
fn mean_over_windows<F>(a: &GrayImage, b: &GrayImage, local: F) -> Result<f64>
where
    F: Fn(&WindowStats) -> f64 + Sync,
{
    a.same_dims(b)?;
    let (fa, fb) = (a.to_float(), b.to_float());
    let (width, height) = (a.width(), a.height());
    let wx = METRIC_WINDOW.min(width);
    let wy = METRIC_WINDOW.min(height);
    let rows: Vec<f64> = (0..=height - wy)
        .into_par_iter()
        .map(|y| {
            (0..=width - wx)
                .map(|x| local(&window_stats(&fa, &fb, width, x, y, wx, wy)))
                .collect::<KahanSum>()
                .value()
        })
        .collect();
    let windows = ((height - wy + 1) * (width - wx + 1)) as f64;
    Ok(rows.into_iter().collect::<KahanSum>().value() / windows)
}

/// Mean structural similarity over 8x8 sliding windows.
pub fn ssim(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    mean_over_windows(a, b, |s| {
        let lum = (2.0 * s.mx * s.my + C1) / (s.mx * s.mx + s.my * s.my + C1);
        let con = (2.0 * s.cxy + C2) / (s.vx + s.vy + C2);
        lum * con
    })
}

/// Mean universal image quality index over 8x8 sliding windows.
pub fn iqi(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    mean_over_windows(a, b, |s| {
        let var_sum = s.vx + s.vy;
        let mean_sq = s.mx * s.mx + s.my * s.my;
        match (var_sum == 0.0, mean_sq == 0.0) {
            (true, true) => 1.0,
            (true, false) => 2.0 * s.mx * s.my / mean_sq,
            (false, true) => 2.0 * s.cxy / var_sum,
            (false, false) => (2.0 * s.cxy / var_sum) * (2.0 * s.mx * s.my / mean_sq),
        }
    })
}

pub fn quality(a: &GrayImage, b: &GrayImage) -> Result<Quality> {
    Ok(Quality {
        mse: mse(a, b)?,
        psnr: psnr(a, b)?,
        ssim: ssim(a, b)?,
        iqi: iqi(a, b)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use rand::{Rng, SeedableRng};

    fn random(w: usize, h: usize, seed: u64) -> GrayImage {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        GrayImage::new(w, h, (0..w * h).map(|_| rng.random()).collect()).unwrap()
    }

    fn checker(w: usize, h: usize, invert: bool) -> GrayImage {
        let pixels = (0..w * h)
            .map(|k| {
                let on = ((k % w) + (k / w)) % 2 == 0;
                if on ^ invert {
                    255
                } else {
                    0
                }
            })
            .collect();
        GrayImage::new(w, h, pixels).unwrap()
    }

    #[test]
    fn identical_images() {
        let a = random(40, 30, 1);
        let q = quality(&a, &a).unwrap();
        assert_eq!(q.mse, 0.0);
        assert_eq!(q.psnr, f64::INFINITY);
        assert_eq!(q.ssim, 1.0);
        assert_eq!(q.iqi, 1.0);
        let flat = GrayImage::filled(16, 16, 0).unwrap();
        assert_eq!(iqi(&flat, &flat).unwrap(), 1.0);
    }

    #[test]
    fn extremes() {
        let a = GrayImage::filled(10, 10, 0).unwrap();
        let b = GrayImage::filled(10, 10, 255).unwrap();
        assert_eq!(mse(&a, &b).unwrap(), 1.0);
        assert_eq!(psnr(&a, &b).unwrap(), 0.0);
    }

    #[test]
    fn checkerboard_inverse_has_iqi_minus_one() {
        let a = checker(16, 16, false);
        let b = checker(16, 16, true);
        assert!((iqi(&a, &b).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn symmetric_and_bounded() {
        let a = random(33, 21, 2);
        let b = random(33, 21, 3);
        assert_eq!(ssim(&a, &b).unwrap(), ssim(&b, &a).unwrap());
        assert_eq!(iqi(&a, &b).unwrap(), iqi(&b, &a).unwrap());
        let s = ssim(&a, &b).unwrap();
        let q = iqi(&a, &b).unwrap();
        assert!((-1.0..=1.0).contains(&s) && (-1.0..=1.0).contains(&q));
    }

    #[test]
    fn dimension_mismatch() {
        let a = random(8, 8, 1);
        let b = random(8, 9, 1);
        assert!(matches!(mse(&a, &b), Err(Error::DimensionMismatch(8, 8, 8, 9))));
        assert!(ssim(&a, &b).is_err());
    }

    #[test]
    fn deterministic_under_parallelism() {
        let a = random(64, 64, 4);
        let b = random(64, 64, 5);
        let q1 = quality(&a, &b).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let q2 = pool.install(|| quality(&a, &b).unwrap());
        assert_eq!(q1, q2);
    }

    #[test]
    fn small_images_use_clipped_windows() {
        let a = random(5, 3, 6);
        assert_eq!(ssim(&a, &a).unwrap(), 1.0);
    }
}
