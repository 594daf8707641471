use rand::Rng;

use crate::dist::seeded_rng;

use super::image::GrayImage;

const LOW: f64 = 20.0;
const HIGH: f64 = 235.0;

/// Seeded test image: a horizontal gradient overlaid with discs, rectangles
/// and diagonal bands. Every pixel lies in 20..=235, so no pixel collides
/// with salt (255) or pepper (0).
pub fn synthetic_shapes(width: usize, height: usize, seed: u64) -> GrayImage {
    let mut rng = seeded_rng(seed);
    let (w, h) = (width as f64, height as f64);
    let mut img: Vec<f64> = (0..width * height)
        .map(|k| 40.0 + 120.0 * (k % width) as f64 / w)
        .collect();
    let scale = w.min(h);
    let shapes = 6 + rng.random_range(0..4);
    for s in 0..shapes {
        let level = rng.random_range(LOW..=HIGH).round();
        let cx = rng.random_range(0.1..0.9) * w;
        let cy = rng.random_range(0.1..0.9) * h;
        let size = rng.random_range(0.08..0.22) * scale;
        for y in 0..height {
            for x in 0..width {
                let (dx, dy) = (x as f64 - cx, y as f64 - cy);
                let inside = match s % 3 {
                    0 => dx * dx + dy * dy < size * size,
                    1 => dx.abs() < size && dy.abs() < 0.6 * size,
                    _ => (dx + dy).abs() < 0.25 * size && dx.abs() < 2.0 * size,
                };
                if inside {
                    img[y * width + x] = level;
                }
            }
        }
    }
    let pixels = img.into_iter().map(|v| v.round().clamp(LOW, HIGH) as u8).collect();
    GrayImage::new(width, height, pixels).expect("dimensions match")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_and_determinism() {
        let a = synthetic_shapes(128, 96, 1);
        assert!(a.pixels().iter().all(|&p| (20..=235).contains(&p)));
        assert_eq!(a, synthetic_shapes(128, 96, 1));
        assert_ne!(a, synthetic_shapes(128, 96, 2));
        let distinct: std::collections::BTreeSet<u8> = a.pixels().iter().copied().collect();
        assert!(distinct.len() > 20);
    }
}
