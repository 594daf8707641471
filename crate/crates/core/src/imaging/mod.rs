//! Grayscale images, noise models, L-estimator denoising and quality metrics.

mod filter;
mod image;
mod metrics;
mod noise;
mod pipeline;
mod synth;

pub use filter::{denoise, Padding};
pub use image::GrayImage;
pub use metrics::{iqi, mse, psnr, quality, ssim, Quality};
pub use noise::{add_noise, estimate_sp_params, NoiseKind, NoiseSpec};
pub use pipeline::{additive_filter, denoise_salt_pepper, salt_pepper_filter, window_model, CoeffRule, SaltPepperRun};
pub use synth::synthetic_shapes;
