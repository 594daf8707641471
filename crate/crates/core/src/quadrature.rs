//! Adaptive Gauss-Kronrod quadrature and a tail-aware integrator on (0, 1).
//!
//! Moments of order statistics are integrated in the probability domain
//! `u = F(x)`, where heavy tails become endpoint behaviour. Each endpoint is
//! covered by dyadic windows `[2^-(k+1), 2^-k]`; the window sequence is also
//! what decides divergence.

use crate::numeric::KahanSum;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Default absolute tolerance.
pub const ABS_TOL: f64 = 1e-10;
/// Default relative tolerance.
pub const REL_TOL: f64 = 1e-8;

const MAX_SEGMENTS: usize = 400;
const DIVERGENCE_WINDOW: usize = 40;
const DIVERGENCE_GROWTH: f64 = 1e-3;
const MAX_WINDOWS: usize = 1000;

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let fsum = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * fsum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * fsum;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Integrates `f` over `[a, b]` with adaptive bisection of the worst segment.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let (v, e) = gk15(&f, a, b);
    let mut segments = vec![(a, b, v, e)];
    loop {
        let total: f64 = segments.iter().map(|s| s.2).sum();
        let err: f64 = segments.iter().map(|s| s.3).sum();
        if !total.is_finite() || err <= abs_tol.max(rel_tol * total.abs()) || segments.len() >= MAX_SEGMENTS {
            return segments.iter().map(|s| s.2).collect::<KahanSum>().value();
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (lo, hi, _, _) = segments.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        segments.push((lo, mid, v1, e1));
        segments.push((mid, hi, v2, e2));
    }
}

/// Outcome of a tail-aware integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailIntegral {
    Finite(f64),
    Divergent,
}

impl TailIntegral {
    pub fn finite(self) -> Option<f64> {
        match self {
            TailIntegral::Finite(v) => Some(v),
            TailIntegral::Divergent => None,
        }
    }
}

/// Integrates a function over the open interval (0, 1).
///
/// `near_zero(u)` evaluates the integrand at `u` and is used on `(0, 1/2]`;
/// `near_one(v)` evaluates it at `u = 1 - v` and is used on `(0, 1/2]` in `v`,
/// so both endpoints keep full relative precision.
///
/// After 40 dyadic windows on a side, a window that still adds more than 1e-3
/// of that side's accumulated magnitude marks the integral as divergent.
pub fn integrate_unit_interval<L, R>(near_zero: L, near_one: R) -> TailIntegral
where
    L: Fn(f64) -> f64,
    R: Fn(f64) -> f64,
{
    let left = integrate_side(&near_zero);
    let right = integrate_side(&near_one);
    match (left, right) {
        (TailIntegral::Finite(l), TailIntegral::Finite(r)) => TailIntegral::Finite(l + r),
        _ => TailIntegral::Divergent,
    }
}

fn integrate_side<F: Fn(f64) -> f64>(f: &F) -> TailIntegral {
    let mut total = KahanSum::new();
    let mut magnitude = 0.0f64;
    let mut hi = 0.5f64;
    for k in 1..=MAX_WINDOWS {
        let lo = hi * 0.5;
        let part = integrate(f, lo, hi, ABS_TOL * 1e-6, REL_TOL * 1e-2);
        if !part.is_finite() {
            return TailIntegral::Divergent;
        }
        total.add(part);
        magnitude += part.abs();
        if k >= DIVERGENCE_WINDOW && part.abs() > DIVERGENCE_GROWTH * magnitude {
            return TailIntegral::Divergent;
        }
        if k >= 8 && part.abs() <= 1e-17 * magnitude.max(f64::MIN_POSITIVE) {
            break;
        }
        hi = lo;
        if hi < 1e-300 {
            break;
        }
    }
    TailIntegral::Finite(total.value())
}
