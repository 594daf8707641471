use crate::dist::{ContinuousDist, DiscreteDist};
use crate::error::Result;
use crate::lestimator::{coeffs_continuous, coeffs_salt_pepper, coeffs_sequential, LEstimator};
use crate::measures::{self, LogBase, Measure, MeasureOptions};
use crate::order_stats::SampleModel;

use super::filter::{denoise, Padding};
use super::image::GrayImage;
use super::noise::estimate_sp_params;

/// Stand-in clean pixel value for the window model. Entropies of order
/// statistics depend only on the probabilities, not on this value.
const CLEAN_VALUE: f64 = 128.0;

/// How salt-and-pepper coefficients are derived from the window model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoeffRule {
    /// Weights from single-index entropies: inverse for rho < 0.5, direct otherwise.
    Entropy,
    /// Weights from the first `d` sequential conditional entropy gains.
    Sequential { d: usize },
}

/// Outcome of the salt-and-pepper denoising pipeline.
#[derive(Debug, Clone)]
pub struct SaltPepperRun {
    pub output: GrayImage,
    /// `None` when the image showed no corruption and was returned unchanged.
    pub filter: Option<LEstimator>,
    pub rho: f64,
    pub rho1: f64,
}

/// Window model of a corrupted pixel: `w*w` samples from the three-point law.
pub fn window_model(w: usize, rho: f64, rho1: f64) -> Result<SampleModel> {
    SampleModel::new(w * w, DiscreteDist::salt_pepper(CLEAN_VALUE, rho, rho1)?)
}

/// Coefficients for a `w x w` window under salt-and-pepper noise.
pub fn salt_pepper_filter(w: usize, rho: f64, rho1: f64, rule: CoeffRule, base: LogBase) -> Result<LEstimator> {
    let model = window_model(w, rho, rho1)?;
    match rule {
        CoeffRule::Entropy => {
            let r1 = measures::profile(&model, Measure::R1, &MeasureOptions::with_base(base))?;
            coeffs_salt_pepper(&r1, rho)
        }
        CoeffRule::Sequential { d } => coeffs_sequential(&model, d, base),
    }
}

/// Coefficients for a `w x w` window under additive noise with law `noise`.
pub fn additive_filter(w: usize, noise: &ContinuousDist) -> Result<LEstimator> {
    let model = SampleModel::new(w * w, noise.clone())?;
    let r3 = measures::profile(&model, Measure::R3, &MeasureOptions::default())?;
    coeffs_continuous(&r3)
}

/// Estimates the noise rates (unless given), builds the coefficients and
/// filters the image.
///
/// An image without any 0 or 255 pixel, or one where the window law is a
/// single point, carries no usable order-statistic information and is
/// returned unchanged.
pub fn denoise_salt_pepper(
    img: &GrayImage,
    w: usize,
    rule: CoeffRule,
    rates: Option<(f64, f64)>,
    base: LogBase,
    padding: Padding,
) -> Result<SaltPepperRun> {
    let (rho, rho1) = rates.unwrap_or_else(|| estimate_sp_params(img));
    let degenerate = DiscreteDist::salt_pepper(CLEAN_VALUE, rho, rho1)?.len() == 1;
    if rho == 0.0 || degenerate {
        return Ok(SaltPepperRun {
            output: img.clone(),
            filter: None,
            rho,
            rho1,
        });
    }
    let filter = salt_pepper_filter(w, rho, rho1, rule, base)?;
    let output = denoise(img, &filter, w, padding)?;
    Ok(SaltPepperRun {
        output,
        filter: Some(filter),
        rho,
        rho1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imaging::{add_noise, mse, synthetic_shapes, NoiseSpec};
    use crate::lestimator::NamedFilter;

    #[test]
    fn clean_image_is_returned_unchanged() {
        let img = synthetic_shapes(32, 32, 1);
        let run = denoise_salt_pepper(&img, 3, CoeffRule::Entropy, None, LogBase::Two, Padding::Reflect).unwrap();
        assert!(run.filter.is_none());
        assert_eq!(run.output, img);
    }

    #[test]
    fn beats_median_at_high_noise() {
        let img = synthetic_shapes(96, 96, 3);
        let noisy = add_noise(&img, &NoiseSpec::salt_pepper(0.7, 0.3, 4)).unwrap();
        let run = denoise_salt_pepper(&noisy, 5, CoeffRule::Entropy, None, LogBase::Two, Padding::Reflect).unwrap();
        let med = LEstimator::named(NamedFilter::Median, 25).unwrap();
        let by_median = denoise(&noisy, &med, 5, Padding::Reflect).unwrap();
        assert!(mse(&run.output, &img).unwrap() < mse(&by_median, &img).unwrap());
    }

    #[test]
    fn sequential_rule_runs() {
        let img = synthetic_shapes(48, 48, 5);
        let noisy = add_noise(&img, &NoiseSpec::salt_pepper(0.5, 0.5, 6)).unwrap();
        let run = denoise_salt_pepper(&noisy, 3, CoeffRule::Sequential { d: 4 }, None, LogBase::Two, Padding::Reflect)
            .unwrap();
        let f = run.filter.unwrap();
        assert_eq!(f.alpha().iter().filter(|a| **a > 0.0).count(), 4);
        assert!(mse(&run.output, &img).unwrap() < mse(&noisy, &img).unwrap());
    }

    #[test]
    fn additive_filter_zeroes_infinite_extremes() {
        let f = additive_filter(5, &ContinuousDist::cauchy(0.0, 2.0).unwrap()).unwrap();
        assert_eq!(f.alpha()[0], 0.0);
        assert_eq!(f.alpha()[24], 0.0);
        assert!((f.alpha().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
