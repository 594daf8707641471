//! Closed-form measures for Bernoulli and Uniform parents.
//!
//! With a Bernoulli(p) parent, X_(i) = 1 exactly when fewer than i samples
//! are zero. Writing B ~ Binomial(n, 1-p) for the number of zeros and
//! v(i) = P(B < i), the order statistic X_(i) is Bernoulli(v(i)).

use crate::error::{Error, Result};
use crate::measures::{LogBase, Measure};
use crate::numeric::{binary_entropy, BinomialRef};

fn check_bernoulli(n: usize, p: f64, i: usize) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidArgument(format!("p={p} must lie in (0, 1)")));
    }
    if i == 0 || i > n {
        return Err(Error::InvalidIndexSet(format!("index {i} outside [1, {n}]")));
    }
    Ok(())
}

/// P(B < i) for B ~ Binomial(n, 1-p).
pub fn bernoulli_v(n: usize, p: f64, i: usize) -> f64 {
    BinomialRef::new(n, 1.0 - p).lower_tail(i)
}

/// h_b(v(i)).
pub fn bernoulli_r1(n: usize, p: f64, i: usize, base: LogBase) -> Result<f64> {
    check_bernoulli(n, p, i)?;
    Ok(binary_entropy(bernoulli_v(n, p, i)) * base.from_nats())
}

/// n p^2 P(B'<i)^2 / v + n p^2 P(B'>=i)^2 / (1-v) - n p^2, B' ~ Binomial(n-1, 1-p).
///
/// A term whose denominator vanishes has a vanishing numerator as well and is dropped.
pub fn bernoulli_r2(n: usize, p: f64, i: usize) -> Result<f64> {
    check_bernoulli(n, p, i)?;
    let b = BinomialRef::new(n, 1.0 - p);
    let b1 = BinomialRef::new(n - 1, 1.0 - p);
    let (v, w) = (b.lower_tail(i), b.upper_tail(i));
    let (lo, hi) = (b1.lower_tail(i), b1.upper_tail(i));
    let mut acc = -1.0;
    if v > 0.0 {
        acc += lo * lo / v;
    }
    if w > 0.0 {
        acc += hi * hi / w;
    }
    Ok((n as f64 * p * p * acc).max(0.0))
}

/// v(i) (1 - v(i)).
pub fn bernoulli_r3(n: usize, p: f64, i: usize) -> Result<f64> {
    check_bernoulli(n, p, i)?;
    let b = BinomialRef::new(n, 1.0 - p);
    Ok(b.lower_tail(i) * b.upper_tail(i))
}

/// The median-of-B index maximizing r1 and r3.
///
/// The crossing of P(B >= i) through 1/2 sits at a median of B, which lies in
/// {floor(n(1-p)), ceil(n(1-p))}; the maximizer is that median or the next
/// index. Among floor, ceil and ceil + 1 (clamped to [1, n]) the one
/// minimizing |P(B >= i) - 1/2| wins; ties (within 1e-12) go to the smaller
/// index.
pub fn bernoulli_argmax(n: usize, p: f64) -> Result<usize> {
    check_bernoulli(n, p, 1)?;
    let mean = n as f64 * (1.0 - p);
    let b = BinomialRef::new(n, 1.0 - p);
    let lo = (mean.floor() as usize).clamp(1, n);
    let hi = (mean.ceil() as usize + 1).clamp(1, n);
    let dist = |i: usize| (b.upper_tail(i) - 0.5).abs();
    let mut best = lo;
    for i in lo + 1..=hi {
        if dist(i) < dist(best) - 1e-12 {
            best = i;
        }
    }
    Ok(best)
}

fn check_uniform(n: usize, a: f64, i: usize) -> Result<()> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::InvalidArgument(format!("interval length a={a} must be > 0")));
    }
    if i == 0 || i > n {
        return Err(Error::InvalidIndexSet(format!("index {i} outside [1, {n}]")));
    }
    Ok(())
}

/// a^2 i (n+1-i) / (4 n (n+2)) for a Uniform(0, a) parent.
pub fn uniform_r2(n: usize, a: f64, i: usize) -> Result<f64> {
    check_uniform(n, a, i)?;
    let (nf, i) = (n as f64, i as f64);
    Ok(a * a * (i * (nf + 1.0 - i) / (4.0 * nf * (nf + 2.0))))
}

/// a^2 i (n+1-i) / ((n+1)^2 (n+2)), the variance of a scaled Beta(i, n-i+1).
pub fn uniform_r3(n: usize, a: f64, i: usize) -> Result<f64> {
    check_uniform(n, a, i)?;
    let (nf, i) = (n as f64, i as f64);
    Ok(a * a * (i * (nf + 1.0 - i) / ((nf + 1.0) * (nf + 1.0) * (nf + 2.0))))
}

/// Maximizers of the uniform r2/r3 profile: {floor((n+1)/2), ceil((n+1)/2)}.
pub fn uniform_argmax(n: usize) -> Result<Vec<usize>> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    let lo = n.div_ceil(2);
    let hi = (n + 2) / 2;
    Ok(if lo == hi { vec![lo] } else { vec![lo, hi] })
}

/// Bernoulli r1 (in nats) or r3 at i = floor(c n), for large-n limit checks.
pub fn asymptotic_r1_r3(n: usize, p: f64, c: f64, which: Measure) -> Result<f64> {
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::InvalidArgument(format!("c={c} must lie in (0, 1)")));
    }
    let i = ((c * n as f64).floor() as usize).clamp(1, n);
    match which {
        Measure::R1 => bernoulli_r1(n, p, i, LogBase::E),
        Measure::R3 => bernoulli_r3(n, p, i),
        Measure::R2 => Err(Error::InvalidArgument("the limit is stated for r1 and r3 only".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    #[test]
    fn bernoulli_examples() {
        assert!((bernoulli_r1(1, 0.5, 1, LogBase::E).unwrap() - LN_2).abs() < 1e-15);
        assert!((bernoulli_r2(1, 0.5, 1).unwrap() - 0.25).abs() < 1e-15);
        assert!((bernoulli_r3(1, 0.3, 1).unwrap() - 0.21).abs() < 1e-15);
        assert_eq!(
            bernoulli_r1(19, 0.5, 9, LogBase::E).unwrap(),
            bernoulli_r1(19, 0.5, 11, LogBase::E).unwrap()
        );
        for i in 1..=19 {
            let a = bernoulli_r2(19, 0.5, i).unwrap();
            let b = bernoulli_r2(19, 0.5, 20 - i).unwrap();
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn argmax_examples() {
        assert_eq!(bernoulli_argmax(19, 0.5).unwrap(), 10);
        assert_eq!(bernoulli_argmax(10, 0.9).unwrap(), 1);
        assert_eq!(uniform_argmax(5).unwrap(), vec![3]);
        assert_eq!(uniform_argmax(6).unwrap(), vec![3, 4]);
    }

    #[test]
    fn uniform_examples() {
        assert!((uniform_r3(1, 1.0, 1).unwrap() - 1.0 / 12.0).abs() < 1e-15);
        assert!((uniform_r3(5, 1.0, 3).unwrap() - 1.0 / 28.0).abs() < 1e-15);
        for n in 1..12 {
            for i in 1..=n {
                let a = 3.7;
                assert_eq!(uniform_r2(n, a, i).unwrap(), a * a * uniform_r2(n, 1.0, i).unwrap());
                assert_eq!(uniform_r3(n, a, i).unwrap(), a * a * uniform_r3(n, 1.0, i).unwrap());
            }
        }
    }

    #[test]
    fn tail_is_strictly_increasing() {
        for i in 1..30 {
            assert!(bernoulli_v(30, 0.4, i) < bernoulli_v(30, 0.4, i + 1));
        }
    }

    #[test]
    fn guards() {
        assert!(bernoulli_r1(5, 0.0, 1, LogBase::E).is_err());
        assert!(bernoulli_r3(5, 0.5, 6).is_err());
        assert!(uniform_r2(5, 0.0, 1).is_err());
        assert!(asymptotic_r1_r3(100, 0.5, 0.5, Measure::R2).is_err());
    }

    #[test]
    fn proposition_limits() {
        let n = 10_000;
        assert!((asymptotic_r1_r3(n, 0.5, 0.5, Measure::R3).unwrap() - 0.25).abs() < 0.01);
        assert!((asymptotic_r1_r3(n, 0.3, 0.7, Measure::R1).unwrap() - LN_2).abs() < 0.02);
        assert!(asymptotic_r1_r3(n, 0.3, 0.5, Measure::R1).unwrap() < 1e-6);
    }
}
