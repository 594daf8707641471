//! Parent population models.
//!
//! [`DiscreteDist`] holds a finite support with aligned probabilities. The
//! salt-and-pepper pixel model and the Bernoulli parent are both built on it.
//! [`ContinuousDist`] covers the uniform, Gaussian-mixture and Cauchy
//! families plus a user-supplied variant backed by closures.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::numeric::{compensated_sum, KahanSum};
use crate::quadrature;

/// Tolerance on `sum(probs) == 1` for discrete distributions.
pub const PROB_SUM_TOL: f64 = 1e-12;

/// Seeded generator used for every sampling routine in the crate.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform draw on the open interval (0, 1).
pub fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    ((rng.random::<u64>() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// Finite-support discrete distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDist {
    support: Vec<f64>,
    probs: Vec<f64>,
    // cdf[j] = P(X <= support[j]); last entry forced to 1
    cdf: Vec<f64>,
    // upper[j] = P(X >= support[j]), accumulated from the right
    upper: Vec<f64>,
}

impl DiscreteDist {
    pub fn new(support: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::InvalidDistribution("empty support".into()));
        }
        if support.len() != probs.len() {
            return Err(Error::InvalidDistribution(format!(
                "support has {} points but {} probabilities were given",
                support.len(),
                probs.len()
            )));
        }
        if support.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidDistribution("support values must be finite".into()));
        }
        if support.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidDistribution(
                "support must be strictly increasing".into(),
            ));
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidDistribution("probabilities must be >= 0".into()));
        }
        let total = compensated_sum(probs.iter().copied());
        if (total - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        let m = support.len();
        let mut cdf = Vec::with_capacity(m);
        let mut acc = KahanSum::new();
        for p in &probs {
            acc.add(*p);
            cdf.push(acc.value().min(1.0));
        }
        cdf[m - 1] = 1.0;
        let mut upper = vec![0.0; m];
        let mut acc = KahanSum::new();
        for j in (0..m).rev() {
            acc.add(probs[j]);
            upper[j] = acc.value().min(1.0);
        }
        Ok(Self {
            support,
            probs,
            cdf,
            upper,
        })
    }

    /// Point mass at `x`.
    pub fn point(x: f64) -> Result<Self> {
        Self::new(vec![x], vec![1.0])
    }

    /// Bernoulli(p) on {0, 1}.
    pub fn bernoulli(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidDistribution(format!("Bernoulli p={p} outside [0,1]")));
        }
        Self::new(vec![0.0, 1.0], vec![1.0 - p, p])
    }

    /// Salt-and-pepper observation model for a clean pixel value `x`.
    ///
    /// Masses are `rho1*rho` at 0, `1-rho` at `x` and `(1-rho1)*rho` at 255.
    /// Zero-mass points are dropped.
    pub fn salt_pepper(x: f64, rho: f64, rho1: f64) -> Result<Self> {
        if !(x > 0.0 && x < 255.0) {
            return Err(Error::InvalidDistribution(format!(
                "clean pixel value {x} must lie strictly inside (0, 255)"
            )));
        }
        for (name, v) in [("rho", rho), ("rho1", rho1)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidDistribution(format!("{name}={v} outside [0,1]")));
            }
        }
        let points = [(0.0, rho1 * rho), (x, 1.0 - rho), (255.0, (1.0 - rho1) * rho)];
        let (support, probs): (Vec<f64>, Vec<f64>) =
            points.into_iter().filter(|(_, p)| *p > 0.0).unzip();
        Self::new(support, probs)
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Number of support points.
    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// Position of `x` in the support, if present.
    pub fn category_of(&self, x: f64) -> Option<usize> {
        self.support
            .binary_search_by(|s| s.total_cmp(&x))
            .ok()
    }

    pub fn pmf(&self, x: f64) -> f64 {
        self.category_of(x).map_or(0.0, |j| self.probs[j])
    }

    /// P(X <= x).
    pub fn cdf(&self, x: f64) -> f64 {
        let k = self.support.partition_point(|s| *s <= x);
        if k == 0 {
            0.0
        } else {
            self.cdf[k - 1]
        }
    }

    /// P(X < x).
    pub fn cdf_before(&self, x: f64) -> f64 {
        let k = self.support.partition_point(|s| *s < x);
        if k == 0 {
            0.0
        } else {
            self.cdf[k - 1]
        }
    }

    /// P(X <= support[j]).
    pub fn cdf_at(&self, j: usize) -> f64 {
        self.cdf[j]
    }

    /// P(X > support[j]), accumulated from the upper end.
    pub fn survival_at(&self, j: usize) -> f64 {
        if j + 1 >= self.len() {
            0.0
        } else {
            self.upper[j + 1]
        }
    }

    /// P(X >= support[j]).
    pub fn upper_at(&self, j: usize) -> f64 {
        self.upper[j]
    }

    /// Smallest support point whose cdf reaches `u`.
    pub fn quantile(&self, u: f64) -> f64 {
        self.support[self.quantile_category(u)]
    }

    pub fn quantile_category(&self, u: f64) -> usize {
        let u = u.clamp(0.0, 1.0);
        let j = if u <= 0.0 {
            self.probs.iter().position(|p| *p > 0.0).unwrap_or(0)
        } else {
            self.cdf.partition_point(|c| *c < u)
        };
        j.min(self.len() - 1)
    }

    pub fn mean(&self) -> f64 {
        compensated_sum(self.support.iter().zip(&self.probs).map(|(v, p)| v * p))
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        compensated_sum(
            self.support
                .iter()
                .zip(&self.probs)
                .map(|(v, p)| p * (v - m) * (v - m)),
        )
    }

    /// Same probabilities on the support shifted by `c`.
    pub fn shifted(&self, c: f64) -> Result<Self> {
        Self::new(self.support.iter().map(|v| v + c).collect(), self.probs.clone())
    }

    pub fn draw_category<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.quantile_category(open_unit(rng))
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.support[self.draw_category(rng)]
    }
}

/// One component of a Gaussian mixture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianComponent {
    pub mean: f64,
    pub variance: f64,
    pub weight: f64,
}

impl GaussianComponent {
    fn sd(&self) -> f64 {
        self.variance.sqrt()
    }
}

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A continuous distribution supplied as closures.
#[derive(Clone)]
pub struct CustomDist {
    name: String,
    pdf: RealFn,
    cdf: RealFn,
    quantile: RealFn,
}

impl CustomDist {
    pub fn name(&self) -> &str {
        &self.name
    }
}

impl fmt::Debug for CustomDist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomDist").field("name", &self.name).finish_non_exhaustive()
    }
}

/// The family behind a [`ContinuousDist`].
#[derive(Debug, Clone)]
pub enum Family {
    Uniform { a: f64, b: f64 },
    GaussianMixture(Vec<GaussianComponent>),
    Cauchy { location: f64, scale: f64 },
    Custom(CustomDist),
}

/// Validated continuous distribution.
#[derive(Debug, Clone)]
pub struct ContinuousDist {
    family: Family,
}

fn std_normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z * FRAC_1_SQRT_2)
}

fn std_normal_sf(z: f64) -> f64 {
    0.5 * erfc(z * FRAC_1_SQRT_2)
}

fn std_normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}

/// P(lo < Z < hi) for a standard normal, using whichever tail is accurate.
fn std_normal_mass(lo: f64, hi: f64) -> f64 {
    if lo >= 0.0 {
        std_normal_sf(lo) - std_normal_sf(hi)
    } else {
        std_normal_cdf(hi) - std_normal_cdf(lo)
    }
}

impl ContinuousDist {
    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidDistribution(format!("Uniform requires a < b, got ({a}, {b})")));
        }
        Ok(Self {
            family: Family::Uniform { a, b },
        })
    }

    pub fn gaussian_mixture(means: &[f64], variances: &[f64], weights: &[f64]) -> Result<Self> {
        let k = means.len();
        if k == 0 || variances.len() != k || weights.len() != k {
            return Err(Error::InvalidDistribution(
                "mixture needs equally many means, variances and weights".into(),
            ));
        }
        if variances.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::InvalidDistribution("mixture variances must be > 0".into()));
        }
        if means.iter().any(|m| !m.is_finite()) || weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::InvalidDistribution("mixture means/weights invalid".into()));
        }
        let total = compensated_sum(weights.iter().copied());
        if (total - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::InvalidDistribution(format!("mixture weights sum to {total}")));
        }
        let components = (0..k)
            .map(|c| GaussianComponent {
                mean: means[c],
                variance: variances[c],
                weight: weights[c],
            })
            .collect();
        Ok(Self {
            family: Family::GaussianMixture(components),
        })
    }

    pub fn normal(mean: f64, variance: f64) -> Result<Self> {
        Self::gaussian_mixture(&[mean], &[variance], &[1.0])
    }

    pub fn cauchy(location: f64, scale: f64) -> Result<Self> {
        if !(location.is_finite() && scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidDistribution(format!(
                "Cauchy requires a finite location and scale > 0, got ({location}, {scale})"
            )));
        }
        Ok(Self {
            family: Family::Cauchy { location, scale },
        })
    }

    /// Distribution defined by user closures. `quantile` must invert `cdf`.
    pub fn custom<P, C, Q>(name: impl Into<String>, pdf: P, cdf: C, quantile: Q) -> Self
    where
        P: Fn(f64) -> f64 + Send + Sync + 'static,
        C: Fn(f64) -> f64 + Send + Sync + 'static,
        Q: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            family: Family::Custom(CustomDist {
                name: name.into(),
                pdf: Arc::new(pdf),
                cdf: Arc::new(cdf),
                quantile: Arc::new(quantile),
            }),
        }
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn is_uniform(&self) -> bool {
        matches!(self.family, Family::Uniform { .. })
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match &self.family {
            Family::Uniform { a, b } => {
                if x >= *a && x <= *b {
                    1.0 / (b - a)
                } else {
                    0.0
                }
            }
            Family::GaussianMixture(cs) => cs
                .iter()
                .map(|c| c.weight * std_normal_pdf((x - c.mean) / c.sd()) / c.sd())
                .sum(),
            Family::Cauchy { location, scale } => {
                let z = (x - location) / scale;
                1.0 / (PI * scale * (1.0 + z * z))
            }
            Family::Custom(c) => (c.pdf)(x),
        }
    }

    /// P(X <= x).
    pub fn cdf(&self, x: f64) -> f64 {
        match &self.family {
            Family::Uniform { a, b } => ((x - a) / (b - a)).clamp(0.0, 1.0),
            Family::GaussianMixture(cs) => cs
                .iter()
                .map(|c| c.weight * std_normal_cdf((x - c.mean) / c.sd()))
                .sum::<f64>()
                .min(1.0),
            Family::Cauchy { location, scale } => {
                let z = (x - location) / scale;
                if z < 0.0 {
                    (1.0f64).atan2(-z) / PI
                } else {
                    1.0 - (1.0f64).atan2(z) / PI
                }
            }
            Family::Custom(c) => (c.cdf)(x),
        }
    }

    /// P(X > x), accurate in the upper tail.
    pub fn sf(&self, x: f64) -> f64 {
        match &self.family {
            Family::Uniform { a, b } => ((b - x) / (b - a)).clamp(0.0, 1.0),
            Family::GaussianMixture(cs) => cs
                .iter()
                .map(|c| c.weight * std_normal_sf((x - c.mean) / c.sd()))
                .sum::<f64>()
                .min(1.0),
            Family::Cauchy { location, scale } => {
                let z = (x - location) / scale;
                if z > 0.0 {
                    (1.0f64).atan2(z) / PI
                } else {
                    1.0 - (1.0f64).atan2(-z) / PI
                }
            }
            Family::Custom(c) => 1.0 - (c.cdf)(x),
        }
    }

    /// Lower quantile: x with P(X <= x) = u.
    pub fn quantile(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return self.lower_end();
        }
        if u >= 1.0 {
            return self.upper_end();
        }
        match &self.family {
            Family::Uniform { a, b } => a + (b - a) * u,
            Family::Cauchy { location, scale } => {
                if u < 0.5 {
                    location - scale / (PI * u).tan()
                } else {
                    location + scale / (PI * (1.0 - u)).tan()
                }
            }
            Family::GaussianMixture(cs) => {
                if u <= 0.5 {
                    mixture_solve(cs, u, false)
                } else {
                    mixture_solve(cs, 1.0 - u, true)
                }
            }
            Family::Custom(c) => (c.quantile)(u),
        }
    }

    /// Upper quantile: x with P(X > x) = v, accurate for small v.
    pub fn quantile_upper(&self, v: f64) -> f64 {
        if v <= 0.0 {
            return self.upper_end();
        }
        if v >= 1.0 {
            return self.lower_end();
        }
        match &self.family {
            Family::Uniform { a, b } => b - (b - a) * v,
            Family::Cauchy { location, scale } => {
                if v <= 0.5 {
                    location + scale / (PI * v).tan()
                } else {
                    location - scale / (PI * (1.0 - v)).tan()
                }
            }
            Family::GaussianMixture(cs) => {
                if v <= 0.5 {
                    mixture_solve(cs, v, true)
                } else {
                    mixture_solve(cs, 1.0 - v, false)
                }
            }
            Family::Custom(c) => (c.quantile)(1.0 - v),
        }
    }

    fn lower_end(&self) -> f64 {
        match &self.family {
            Family::Uniform { a, .. } => *a,
            _ => f64::NEG_INFINITY,
        }
    }

    fn upper_end(&self) -> f64 {
        match &self.family {
            Family::Uniform { b, .. } => *b,
            _ => f64::INFINITY,
        }
    }

    /// Mean, when it exists.
    pub fn mean(&self) -> Option<f64> {
        match &self.family {
            Family::Uniform { a, b } => Some(0.5 * (a + b)),
            Family::GaussianMixture(cs) => Some(cs.iter().map(|c| c.weight * c.mean).sum()),
            Family::Cauchy { .. } => None,
            Family::Custom(_) => self.truncated_mean(f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// Variance, when it exists.
    pub fn variance(&self) -> Option<f64> {
        match &self.family {
            Family::Uniform { a, b } => Some((b - a) * (b - a) / 12.0),
            Family::GaussianMixture(cs) => {
                let m: f64 = cs.iter().map(|c| c.weight * c.mean).sum();
                Some(
                    cs.iter()
                        .map(|c| c.weight * (c.variance + (c.mean - m) * (c.mean - m)))
                        .sum(),
                )
            }
            Family::Cauchy { .. } => None,
            Family::Custom(_) => {
                let m = self.mean()?;
                let r = quadrature::integrate_unit_interval(
                    |u| (self.quantile(u) - m).powi(2),
                    |v| (self.quantile_upper(v) - m).powi(2),
                );
                r.finite()
            }
        }
    }

    /// Location/scale pair used to standardize integrals.
    pub fn location_scale(&self) -> (f64, f64) {
        match &self.family {
            Family::Uniform { a, b } => (0.5 * (a + b), 0.5 * (b - a)),
            Family::Cauchy { location, scale } => (*location, *scale),
            _ => {
                let med = self.quantile(0.5);
                let iqr = self.quantile(0.75) - self.quantile(0.25);
                let scale = if iqr.is_finite() && iqr > 0.0 { 0.5 * iqr } else { 1.0 };
                (med, scale)
            }
        }
    }

    /// P(lo < X < hi).
    pub fn mass_between(&self, lo: f64, hi: f64) -> f64 {
        if hi <= lo {
            return 0.0;
        }
        match &self.family {
            Family::GaussianMixture(cs) => cs
                .iter()
                .map(|c| c.weight * std_normal_mass((lo - c.mean) / c.sd(), (hi - c.mean) / c.sd()))
                .sum(),
            _ => {
                let (m, _) = self.location_scale();
                if lo >= m {
                    self.sf(lo) - self.sf(hi)
                } else {
                    self.cdf(hi) - self.cdf(lo)
                }
            }
        }
    }

    /// E[X | lo < X < hi]; `None` when the conditional mean does not exist.
    pub fn truncated_mean(&self, lo: f64, hi: f64) -> Option<f64> {
        match &self.family {
            Family::Uniform { a, b } => {
                let l = lo.max(*a);
                let h = hi.min(*b);
                Some(0.5 * (l + h.max(l)))
            }
            Family::GaussianMixture(cs) => {
                let mut num = 0.0;
                let mut den = 0.0;
                for c in cs {
                    let sd = c.sd();
                    let (zl, zh) = ((lo - c.mean) / sd, (hi - c.mean) / sd);
                    let mass = std_normal_mass(zl, zh);
                    let dens = std_normal_pdf(zl) - std_normal_pdf(zh);
                    num += c.weight * (c.mean * mass + sd * dens);
                    den += c.weight * mass;
                }
                if den > 0.0 {
                    Some(num / den)
                } else if lo.is_finite() && hi.is_finite() {
                    Some(0.5 * (lo + hi))
                } else if lo.is_finite() {
                    Some(lo)
                } else {
                    Some(hi)
                }
            }
            Family::Cauchy { location, scale } => {
                if !(lo.is_finite() && hi.is_finite()) {
                    return None;
                }
                let mass = self.mass_between(lo, hi);
                if mass <= 0.0 {
                    return Some(0.5 * (lo + hi));
                }
                let (zl, zh) = ((lo - location) / scale, (hi - location) / scale);
                let log_ratio = (zh * zh).ln_1p() - (zl * zl).ln_1p();
                Some(location + scale * log_ratio / (2.0 * PI * mass))
            }
            Family::Custom(_) => {
                let ul = self.cdf(lo);
                let uh = self.cdf(hi);
                if uh <= ul {
                    return Some(0.5 * (lo + hi));
                }
                let inner = quadrature::integrate(
                    |u| self.quantile(u),
                    ul,
                    uh,
                    quadrature::ABS_TOL,
                    quadrature::REL_TOL,
                );
                inner.is_finite().then_some(inner / (uh - ul))
            }
        }
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.family {
            Family::GaussianMixture(cs) => {
                let u = open_unit(rng);
                let mut acc = 0.0;
                let mut chosen = cs.len() - 1;
                for (k, c) in cs.iter().enumerate() {
                    acc += c.weight;
                    if u <= acc {
                        chosen = k;
                        break;
                    }
                }
                let c = &cs[chosen];
                let z: f64 = rng.sample(StandardNormal);
                c.mean + c.sd() * z
            }
            _ => self.quantile(open_unit(rng)),
        }
    }
}

/// Solves `cdf(x) = t` (or `sf(x) = t` when `upper`) for a mixture, t <= 1/2.
fn mixture_solve(cs: &[GaussianComponent], t: f64, upper: bool) -> f64 {
    let f = |x: f64| -> f64 {
        if upper {
            cs.iter().map(|c| c.weight * std_normal_sf((x - c.mean) / c.sd())).sum::<f64>() - t
        } else {
            cs.iter().map(|c| c.weight * std_normal_cdf((x - c.mean) / c.sd())).sum::<f64>() - t
        }
    };
    let dens = |x: f64| -> f64 {
        cs.iter()
            .map(|c| c.weight * std_normal_pdf((x - c.mean) / c.sd()) / c.sd())
            .sum()
    };
    let lo_mean = cs.iter().map(|c| c.mean).fold(f64::INFINITY, f64::min);
    let hi_mean = cs.iter().map(|c| c.mean).fold(f64::NEG_INFINITY, f64::max);
    let max_sd = cs.iter().map(|c| c.sd()).fold(0.0, f64::max);
    // |z| <= 40 covers every t representable above 1e-300
    let (mut lo, mut hi) = (lo_mean - 40.0 * max_sd, hi_mean + 40.0 * max_sd);
    // f is increasing in x for the cdf form and decreasing for the sf form
    let sign = if upper { -1.0 } else { 1.0 };
    let mut x = if upper { hi_mean } else { lo_mean };
    for _ in 0..200 {
        let fx = sign * f(x);
        if fx == 0.0 {
            return x;
        }
        if fx > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let d = dens(x);
        let step = if d > 0.0 { fx / d } else { f64::NAN };
        let candidate = x - step;
        let next = if candidate.is_finite() && candidate > lo && candidate < hi {
            candidate
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() <= 1e-15 * x.abs().max(1e-300) || hi - lo <= 1e-15 * hi.abs().max(lo.abs()).max(1e-300) {
            return next;
        }
        x = next;
    }
    x
}

/// Either kind of parent distribution.
#[derive(Debug, Clone)]
pub enum Parent {
    Discrete(DiscreteDist),
    Continuous(ContinuousDist),
}

impl From<DiscreteDist> for Parent {
    fn from(d: DiscreteDist) -> Self {
        Parent::Discrete(d)
    }
}

impl From<ContinuousDist> for Parent {
    fn from(d: ContinuousDist) -> Self {
        Parent::Continuous(d)
    }
}

impl Parent {
    pub fn is_discrete(&self) -> bool {
        matches!(self, Parent::Discrete(_))
    }

    pub fn as_discrete(&self) -> Option<&DiscreteDist> {
        match self {
            Parent::Discrete(d) => Some(d),
            Parent::Continuous(_) => None,
        }
    }

    pub fn as_continuous(&self) -> Option<&ContinuousDist> {
        match self {
            Parent::Continuous(d) => Some(d),
            Parent::Discrete(_) => None,
        }
    }

    /// `(pmf or pdf at x, P(X <= x))`.
    pub fn eval(&self, x: f64) -> (f64, f64) {
        match self {
            Parent::Discrete(d) => (d.pmf(x), d.cdf(x)),
            Parent::Continuous(c) => (c.pdf(x), c.cdf(x)),
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        self.eval(x).1
    }

    pub fn quantile(&self, u: f64) -> f64 {
        match self {
            Parent::Discrete(d) => d.quantile(u),
            Parent::Continuous(c) => c.quantile(u),
        }
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Parent::Discrete(d) => d.draw(rng),
            Parent::Continuous(c) => c.draw(rng),
        }
    }

    /// `count` i.i.d. draws; the same seed always gives the same vector.
    pub fn sample(&self, count: usize, seed: u64) -> Result<Vec<f64>> {
        if count == 0 {
            return Err(Error::InvalidArgument("sample count must be >= 1".into()));
        }
        let mut rng = seeded_rng(seed);
        Ok((0..count).map(|_| self.draw(&mut rng)).collect())
    }
}
