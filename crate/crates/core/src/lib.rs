//! Informativeness of order statistics.
//!
//! Measures how much a subset of order statistics tells about a sample,
//! selects the most informative subsets, and turns the resulting scores into
//! L-estimator coefficients for image denoising.

pub mod closed_forms;
pub mod dist;
pub mod error;
pub mod imaging;
pub mod lestimator;
pub mod measures;
pub mod montecarlo;
pub mod numeric;
pub mod order_stats;
pub mod quadrature;
pub mod report;
pub mod selection;

pub use dist::{ContinuousDist, DiscreteDist, Family, GaussianComponent, Parent};
pub use error::{Error, Result};
pub use imaging::GrayImage;
pub use lestimator::{LEstimator, NamedFilter};
pub use measures::{LogBase, Measure, MeasureOptions, MeasureValue, Unit};
pub use montecarlo::Estimate;
pub use order_stats::{IndexSet, SampleModel};
pub use selection::{Approach, SelectionResult};
