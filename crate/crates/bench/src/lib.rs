//! Fixtures shared by the benchmarks.

use osinfo::imaging::{add_noise, additive_filter, denoise, mse, synthetic_shapes, NoiseSpec, Padding};
use osinfo::lestimator::R1_FLOOR;
use osinfo::measures::{self, Measure, MeasureOptions};
use osinfo::{ContinuousDist, DiscreteDist, GrayImage, IndexSet, LEstimator, Result, SampleModel};

/// Clean synthetic image and its salt-and-pepper corrupted copy.
pub fn noisy_pair(side: usize, rho: f64, rho1: f64, seed: u64) -> (GrayImage, GrayImage) {
    let clean = synthetic_shapes(side, side, seed);
    let noisy = add_noise(&clean, &NoiseSpec::salt_pepper(rho, rho1, seed + 1)).expect("valid rates");
    (clean, noisy)
}

/// A three-point model with `n` samples and a query of `k` equal values.
pub fn joint_query(n: usize, k: usize) -> (SampleModel, IndexSet, Vec<f64>) {
    let dist = DiscreteDist::new(vec![0.0, 1.0, 2.0], vec![0.3, 0.5, 0.2]).expect("valid law");
    let model = SampleModel::new(n, dist).expect("valid model");
    let step = n / (k + 1);
    let s = IndexSet::new((1..=k).map(|j| j * step.max(1)).collect()).expect("distinct indices");
    (model, s, vec![1.0; k])
}

/// MSE of the r3-weighted filter and of inverse-r3 weighting on Cauchy noise.
///
/// Returns `(r3_weighted, inverse_weighted, median)`.
pub fn cauchy_weighting_comparison(side: usize, w: usize, scale: f64, seed: u64) -> Result<(f64, f64, f64)> {
    let noise = ContinuousDist::cauchy(0.0, scale)?;
    let clean = synthetic_shapes(side, side, seed);
    let noisy = add_noise(&clean, &NoiseSpec::additive(noise.clone(), seed + 1))?;

    let direct = additive_filter(w, &noise)?;
    let model = SampleModel::new(w * w, noise)?;
    let r3 = measures::profile(&model, Measure::R3, &MeasureOptions::default())?;
    let inverse = LEstimator::from_weights(
        r3.iter()
            .map(|v| if v.value.is_finite() { 1.0 / v.value.max(R1_FLOOR) } else { 0.0 })
            .collect(),
    )?;
    let median = LEstimator::named(osinfo::NamedFilter::Median, w * w)?;

    let score = |f: &LEstimator| -> Result<f64> { mse(&denoise(&noisy, f, w, Padding::Reflect)?, &clean) };
    Ok((score(&direct)?, score(&inverse)?, score(&median)?))
}
