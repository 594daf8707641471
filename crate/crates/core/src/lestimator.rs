//! L-estimators: weighted sums of sorted window values.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::measures::{LogBase, Measure, MeasureOptions, MeasureValue};
use crate::numeric::compensated_sum;
use crate::order_stats::SampleModel;
use crate::report::format_sig9;
use crate::selection;

/// Tolerance on `sum(alpha) == 1`.
pub const ALPHA_SUM_TOL: f64 = 1e-12;

/// Floor applied to r1 values before inversion.
pub const R1_FLOOR: f64 = 1e-12;

/// Nonnegative coefficients summing to one, applied to the sorted window.
#[derive(Debug, Clone, PartialEq)]
pub struct LEstimator {
    alpha: Vec<f64>,
}

/// Classical filters expressible as L-estimators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedFilter {
    Mean,
    Median,
    Min,
    Max,
    Midpoint,
    /// r-th smallest value, 1-based.
    Rank(usize),
}

impl FromStr for NamedFilter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        Ok(match lower.as_str() {
            "mean" => NamedFilter::Mean,
            "median" => NamedFilter::Median,
            "min" => NamedFilter::Min,
            "max" => NamedFilter::Max,
            "midpoint" => NamedFilter::Midpoint,
            _ => {
                let r = lower
                    .strip_prefix("rank:")
                    .or_else(|| lower.strip_prefix("rank"))
                    .and_then(|r| r.trim_matches(|c| c == '(' || c == ')').parse().ok())
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown filter '{s}'")))?;
                NamedFilter::Rank(r)
            }
        })
    }
}

impl LEstimator {
    /// Validated coefficient vector.
    pub fn new(alpha: Vec<f64>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::InvalidArgument("coefficient vector is empty".into()));
        }
        if alpha.iter().any(|a| !a.is_finite() || *a < 0.0) {
            return Err(Error::InvalidArgument("coefficients must be finite and >= 0".into()));
        }
        let total = compensated_sum(alpha.iter().copied());
        if (total - 1.0).abs() > ALPHA_SUM_TOL {
            return Err(Error::InvalidArgument(format!("coefficients sum to {total}, not 1")));
        }
        Ok(Self { alpha })
    }

    /// Normalizes nonnegative weights to sum to one.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidArgument("weights must be finite and >= 0".into()));
        }
        let total = compensated_sum(weights.iter().copied());
        if total <= 0.0 {
            return Err(Error::InvalidArgument("weights are all zero".into()));
        }
        Self::new(weights.into_iter().map(|w| w / total).collect())
    }

    fn unit_at(n: usize, k: usize) -> Self {
        let mut alpha = vec![0.0; n];
        alpha[k] = 1.0;
        Self { alpha }
    }

    pub fn named(kind: NamedFilter, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("window length must be >= 1".into()));
        }
        Ok(match kind {
            NamedFilter::Mean => Self {
                alpha: vec![1.0 / n as f64; n],
            },
            NamedFilter::Median => {
                if n % 2 == 0 {
                    return Err(Error::InvalidArgument(format!(
                        "median filter needs an odd window length, got {n}"
                    )));
                }
                Self::unit_at(n, n / 2)
            }
            NamedFilter::Min => Self::unit_at(n, 0),
            NamedFilter::Max => Self::unit_at(n, n - 1),
            NamedFilter::Midpoint => {
                if n == 1 {
                    Self::unit_at(1, 0)
                } else {
                    let mut alpha = vec![0.0; n];
                    alpha[0] = 0.5;
                    alpha[n - 1] = 0.5;
                    Self { alpha }
                }
            }
            NamedFilter::Rank(r) => {
                if r == 0 || r > n {
                    return Err(Error::InvalidArgument(format!("rank {r} outside [1, {n}]")));
                }
                Self::unit_at(n, r - 1)
            }
        })
    }

    /// Window length.
    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    /// Sorts a copy of `window` and applies the coefficients.
    pub fn apply(&self, window: &[f64]) -> Result<f64> {
        if window.len() != self.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                got: window.len(),
            });
        }
        let mut buf = window.to_vec();
        Ok(self.apply_in_place(&mut buf))
    }

    /// Sorts `window` in place and applies the coefficients.
    ///
    /// # Panics
    /// If the window length differs from the filter length.
    pub fn apply_in_place(&self, window: &mut [f64]) -> f64 {
        assert_eq!(window.len(), self.n(), "window length mismatch");
        window.sort_unstable_by(f64::total_cmp);
        self.apply_sorted(window)
    }

    /// Applies the coefficients to an already sorted window.
    pub fn apply_sorted(&self, sorted: &[f64]) -> f64 {
        let (first, last) = (sorted[0], sorted[sorted.len() - 1]);
        if first == last {
            return first;
        }
        let mut acc = 0.0;
        for (a, x) in self.alpha.iter().zip(sorted) {
            if *a != 0.0 {
                acc += a * x;
            }
        }
        acc.clamp(first, last)
    }

    /// `k,alpha` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,alpha\n");
        for (k, a) in self.alpha.iter().enumerate() {
            let _ = writeln!(out, "{},{}", k + 1, format_sig9(*a));
        }
        out
    }
}

/// Salt-and-pepper coefficients from r1 values.
///
/// For `rho < 0.5` the weights are inversely proportional to r1 (floored at
/// [`R1_FLOOR`]); otherwise they are proportional to r1.
pub fn coeffs_salt_pepper(r1_values: &[MeasureValue], rho: f64) -> Result<LEstimator> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::InvalidArgument(format!("rho={rho} outside [0, 1]")));
    }
    let r: Vec<f64> = r1_values.iter().map(|v| v.value).collect();
    if r.is_empty() || r.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::InvalidArgument("r1 values must be finite and >= 0".into()));
    }
    if r.iter().all(|v| *v == 0.0) {
        return Err(Error::InvalidArgument("r1 values are all zero".into()));
    }
    let weights = if rho < 0.5 {
        r.iter().map(|v| 1.0 / v.max(R1_FLOOR)).collect()
    } else {
        r
    };
    LEstimator::from_weights(weights)
}

/// Coefficients proportional to the sequential conditional r1 gains of the
/// first `d` greedily selected order statistics; zero elsewhere.
pub fn coeffs_sequential(model: &SampleModel, d: usize, base: LogBase) -> Result<LEstimator> {
    model.discrete()?;
    let opts = MeasureOptions::with_base(base);
    let sel = selection::sequential_select(model, Measure::R1, d, &opts)?;
    let mut weights = vec![0.0; model.n()];
    for (&i, g) in sel.indices.iter().zip(&sel.scores) {
        weights[i - 1] = g.value;
    }
    LEstimator::from_weights(weights)
}

/// Coefficients proportional to r3; non-finite entries get weight zero.
pub fn coeffs_continuous(r3_values: &[MeasureValue]) -> Result<LEstimator> {
    if r3_values.iter().any(|v| v.value.is_finite() && v.value < 0.0) {
        return Err(Error::InvalidArgument("r3 values must be >= 0".into()));
    }
    let weights: Vec<f64> = r3_values
        .iter()
        .map(|v| if v.value.is_finite() { v.value } else { 0.0 })
        .collect();
    if !weights.iter().any(|w| *w > 0.0) {
        return Err(Error::InvalidArgument("no finite positive r3 value".into()));
    }
    LEstimator::from_weights(weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::DiscreteDist;
    use crate::measures::Unit;

    fn mv(v: &[f64]) -> Vec<MeasureValue> {
        v.iter().map(|x| MeasureValue::exact(*x, Unit::Bits)).collect()
    }

    #[test]
    fn apply_examples() {
        let med = LEstimator::named(NamedFilter::Median, 3).unwrap();
        assert_eq!(med.apply(&[3.0, 1.0, 2.0]).unwrap(), 2.0);
        let mid = LEstimator::named(NamedFilter::Midpoint, 5).unwrap();
        assert_eq!(mid.apply(&[0.0, 9.0, 2.0, 7.0, 4.0]).unwrap(), 4.5);
        let mean = LEstimator::named(NamedFilter::Mean, 4).unwrap();
        assert!((mean.apply(&[1.0, 2.0, 3.0, 10.0]).unwrap() - 4.0).abs() < 1e-12);
        assert!(matches!(med.apply(&[1.0]), Err(Error::LengthMismatch { expected: 3, got: 1 })));
    }

    #[test]
    fn named_examples() {
        assert_eq!(LEstimator::named(NamedFilter::Median, 5).unwrap().alpha(), &[0.0, 0.0, 1.0, 0.0, 0.0]);
        assert_eq!(LEstimator::named(NamedFilter::Rank(2), 4).unwrap().alpha(), &[0.0, 1.0, 0.0, 0.0]);
        assert!(LEstimator::named(NamedFilter::Median, 4).is_err());
        assert!(LEstimator::named(NamedFilter::Rank(5), 4).is_err());
        assert_eq!("rank(3)".parse::<NamedFilter>().unwrap(), NamedFilter::Rank(3));
        assert_eq!("rank:3".parse::<NamedFilter>().unwrap(), NamedFilter::Rank(3));
        assert_eq!("Median".parse::<NamedFilter>().unwrap(), NamedFilter::Median);
        assert!("mode".parse::<NamedFilter>().is_err());
    }

    #[test]
    fn validation() {
        assert!(LEstimator::new(vec![0.5, 0.6]).is_err());
        assert!(LEstimator::new(vec![-0.5, 1.5]).is_err());
        assert!(LEstimator::new(vec![]).is_err());
        assert!(LEstimator::from_weights(vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn salt_pepper_coefficients() {
        let flat = coeffs_salt_pepper(&mv(&[0.3; 6]), 0.2).unwrap();
        assert!(flat.alpha().iter().all(|a| (a - 1.0 / 6.0).abs() < 1e-15));
        let flat = coeffs_salt_pepper(&mv(&[0.3; 6]), 0.8).unwrap();
        assert!(flat.alpha().iter().all(|a| (a - 1.0 / 6.0).abs() < 1e-15));
        assert!(coeffs_salt_pepper(&mv(&[0.0; 3]), 0.2).is_err());
        assert!(coeffs_salt_pepper(&mv(&[f64::INFINITY, 1.0]), 0.2).is_err());
        let tiny = coeffs_salt_pepper(&mv(&[0.0, 1e-9, 1.0]), 0.1).unwrap();
        assert!(tiny.alpha()[0] > tiny.alpha()[1] && tiny.alpha()[1] > tiny.alpha()[2]);
    }

    #[test]
    fn continuous_coefficients() {
        let c = coeffs_continuous(&mv(&[f64::INFINITY, 1.0, 3.0, f64::INFINITY])).unwrap();
        assert_eq!(c.alpha(), &[0.0, 0.25, 0.75, 0.0]);
        assert!(coeffs_continuous(&mv(&[f64::INFINITY, f64::INFINITY])).is_err());
        let flat = coeffs_continuous(&mv(&[2.0; 5])).unwrap();
        assert!(flat.alpha().iter().all(|a| (a - 0.2).abs() < 1e-15));
    }

    #[test]
    fn sequential_coefficients() {
        let model = SampleModel::new(16, DiscreteDist::salt_pepper(150.0, 0.8, 0.9).unwrap()).unwrap();
        let opts = MeasureOptions::with_base(LogBase::Two);
        let sel = selection::sequential_select(&model, Measure::R1, 4, &opts).unwrap();
        let c = coeffs_sequential(&model, 4, LogBase::Two).unwrap();
        let support: Vec<usize> = (1..=16).filter(|k| c.alpha()[k - 1] > 0.0).collect();
        let mut want = sel.indices.clone();
        want.sort();
        assert_eq!(support, want);
        let one = coeffs_sequential(&model, 1, LogBase::Two).unwrap();
        assert_eq!(one.alpha().iter().filter(|a| **a > 0.0).count(), 1);
        assert_eq!(one.alpha()[sel.indices[0] - 1], 1.0);
    }

    #[test]
    fn constant_window_is_returned_exactly() {
        let c = LEstimator::from_weights(vec![0.1, 0.7, 0.3, 0.9, 0.2]).unwrap();
        for v in [0.0, 17.3, 255.0, 1.0 / 3.0] {
            assert_eq!(c.apply(&[v; 5]).unwrap(), v);
        }
    }

    #[test]
    fn csv_export() {
        let c = LEstimator::named(NamedFilter::Midpoint, 3).unwrap();
        assert_eq!(c.to_csv(), "k,alpha\n1,0.5\n2,0\n3,0.5\n");
    }
}
