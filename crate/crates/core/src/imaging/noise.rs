use crate::dist::{open_unit, seeded_rng, ContinuousDist};
use crate::error::{Error, Result};

use super::image::GrayImage;

/// Noise model applied independently to every pixel.
#[derive(Debug, Clone)]
pub enum NoiseKind {
    /// With probability `rho` the pixel is replaced: by 0 with probability
    /// `rho1`, otherwise by 255.
    SaltPepper { rho: f64, rho1: f64 },
    /// A fresh draw is added, then rounded and clamped to 0..=255.
    Additive(ContinuousDist),
}

#[derive(Debug, Clone)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn salt_pepper(rho: f64, rho1: f64, seed: u64) -> Self {
        Self {
            kind: NoiseKind::SaltPepper { rho, rho1 },
            seed,
        }
    }

    pub fn additive(dist: ContinuousDist, seed: u64) -> Self {
        Self {
            kind: NoiseKind::Additive(dist),
            seed,
        }
    }
}

/// Round half away from zero and clamp to the 8-bit range.
pub(crate) fn quantize(v: f64) -> u8 {
    if v.is_nan() {
        return 0;
    }
    v.round().clamp(0.0, 255.0) as u8
}

/// Noisy copy of `img`; pixels are visited in row-major order with one
/// seeded generator, so the output depends only on the image and the spec.
pub fn add_noise(img: &GrayImage, spec: &NoiseSpec) -> Result<GrayImage> {
    let mut rng = seeded_rng(spec.seed);
    let mut out = img.clone();
    match &spec.kind {
        NoiseKind::SaltPepper { rho, rho1 } => {
            for (name, v) in [("rho", *rho), ("rho1", *rho1)] {
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::InvalidArgument(format!("{name}={v} outside [0, 1]")));
                }
            }
            let pepper = rho * rho1;
            for p in out.pixels_mut() {
                let u = open_unit(&mut rng);
                if u < pepper {
                    *p = 0;
                } else if u < *rho {
                    *p = 255;
                }
            }
        }
        NoiseKind::Additive(dist) => {
            for p in out.pixels_mut() {
                let z = dist.draw(&mut rng);
                *p = quantize(*p as f64 + z);
            }
        }
    }
    Ok(out)
}

/// Estimates (rho, rho1) from the counts of exact 0 and 255 pixels.
pub fn estimate_sp_params(img: &GrayImage) -> (f64, f64) {
    let zeros = img.pixels().iter().filter(|&&p| p == 0).count();
    let whites = img.pixels().iter().filter(|&&p| p == 255).count();
    let corrupted = zeros + whites;
    if corrupted == 0 {
        return (0.0, 0.0);
    }
    (corrupted as f64 / img.len() as f64, zeros as f64 / corrupted as f64)
}


#[cfg(test)]
mod tests {
    use super::*;

    fn gray(w: usize, h: usize) -> GrayImage {
        let pixels = (0..w * h).map(|k| (20 + (k * 7) % 200) as u8).collect();
        GrayImage::new(w, h, pixels).unwrap()
    }

    #[test]
    fn zero_rate_is_identity() {
        let img = gray(64, 64);
        assert_eq!(add_noise(&img, &NoiseSpec::salt_pepper(0.0, 0.5, 1)).unwrap(), img);
    }

    #[test]
    fn full_pepper() {
        let img = gray(16, 16);
        let out = add_noise(&img, &NoiseSpec::salt_pepper(1.0, 1.0, 1)).unwrap();
        assert!(out.pixels().iter().all(|&p| p == 0));
        assert_eq!(estimate_sp_params(&out), (1.0, 1.0));
    }

    #[test]
    fn rates_concentrate_and_estimates_recover() {
        let img = gray(512, 512);
        let out = add_noise(&img, &NoiseSpec::salt_pepper(0.3, 0.05, 42)).unwrap();
        let (rho, rho1) = estimate_sp_params(&out);
        assert!((rho - 0.3).abs() < 0.01 && (rho1 - 0.05).abs() < 0.02, "{rho} {rho1}");
        assert_eq!(out, add_noise(&img, &NoiseSpec::salt_pepper(0.3, 0.05, 42)).unwrap());
        assert_ne!(out, add_noise(&img, &NoiseSpec::salt_pepper(0.3, 0.05, 43)).unwrap());
    }

    #[test]
    fn no_extreme_pixels_gives_zero_estimates() {
        assert_eq!(estimate_sp_params(&gray(8, 8)), (0.0, 0.0));
    }

    #[test]
    fn additive_noise_rounds_and_clamps() {
        let img = GrayImage::new(3, 1, vec![0, 128, 255]).unwrap();
        let spec = NoiseSpec::additive(ContinuousDist::uniform(-0.49, 0.49).unwrap(), 3);
        assert_eq!(add_noise(&img, &spec).unwrap(), img);
        let spec = NoiseSpec::additive(ContinuousDist::uniform(300.0, 301.0).unwrap(), 3);
        assert!(add_noise(&img, &spec).unwrap().pixels().iter().all(|&p| p == 255));
        assert_eq!(quantize(2.5), 3);
        assert_eq!(quantize(-0.5), 0);
        assert_eq!(quantize(254.5), 255);
    }

    #[test]
    fn invalid_rates() {
        assert!(add_noise(&gray(2, 2), &NoiseSpec::salt_pepper(1.5, 0.5, 1)).is_err());
    }
}
