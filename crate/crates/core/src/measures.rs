//! Informativeness measures r1, r2, r3 of order statistics.
//!
//! For a measured set S and conditioning set V:
//!
//! * r1 = H(X_(S) | X_(V)) for discrete parents, +inf for continuous ones;
//! * r2 = E||E[X^n | X_(V)] - E[X^n | X_(S), X_(V)]||^2, which by
//!   exchangeability equals n E[(E[Xbar | X_(V)] - E[Xbar | X_(S∪V)])^2];
//! * r3 = E||X_(S) - E[X_(S) | X_(V)]||^2 = sum over i in S of E[Var(X_(i) | X_(V))].
//!
//! Exact paths are used wherever available; everything else falls back to the
//! seeded Monte Carlo estimators, whose standard error is attached to the
//! returned [`MeasureValue`].

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use rayon::prelude::*;

use crate::dist::{open_unit, ContinuousDist, DiscreteDist, Family};
use crate::error::{Error, Result};
use crate::montecarlo::{self, Estimate, MeanAccumulator};
use crate::numeric::{choose_u128, ln_factorials, xlogx_neg, BinomialRef, KahanSum};
use crate::order_stats::{joint_pmf_categories, marginal_pmf, IndexSet, SampleModel};
use crate::quadrature::{integrate_unit_interval, TailIntegral};

/// Minimum number of trials accepted by the Monte Carlo estimators.
pub const MIN_TRIALS: usize = 1000;

/// Logarithm base for entropies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogBase {
    #[default]
    E,
    Two,
}

impl LogBase {
    /// Factor converting nats to this base.
    pub fn from_nats(self) -> f64 {
        match self {
            LogBase::E => 1.0,
            LogBase::Two => 1.0 / std::f64::consts::LN_2,
        }
    }

    pub fn unit(self) -> Unit {
        match self {
            LogBase::E => Unit::Nats,
            LogBase::Two => Unit::Bits,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    Nats,
    Bits,
    SquaredUnits,
}

/// A measure value, possibly +inf, with a standard error when estimated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureValue {
    pub value: f64,
    pub unit: Unit,
    pub std_error: Option<f64>,
}

impl MeasureValue {
    pub fn exact(value: f64, unit: Unit) -> Self {
        Self {
            value,
            unit,
            std_error: None,
        }
    }

    pub fn estimated(e: Estimate, unit: Unit) -> Self {
        Self {
            value: e.value,
            unit,
            std_error: Some(e.std_error),
        }
    }

    pub fn infinite(unit: Unit) -> Self {
        Self::exact(f64::INFINITY, unit)
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
    }

    pub fn is_exact(&self) -> bool {
        self.std_error.is_none()
    }
}

impl fmt::Display for MeasureValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.value.is_finite() {
            write!(f, "{}", self.value)
        } else {
            f.write_str("inf")
        }
    }
}

/// Which of the three measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Measure {
    R1,
    R2,
    R3,
}

impl Measure {
    pub fn from_index(m: u8) -> Result<Self> {
        match m {
            1 => Ok(Measure::R1),
            2 => Ok(Measure::R2),
            3 => Ok(Measure::R3),
            _ => Err(Error::InvalidArgument(format!("measure index must be 1, 2 or 3, got {m}"))),
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Measure::R1 => 1,
            Measure::R2 => 2,
            Measure::R3 => 3,
        }
    }
}

/// Knobs shared by the measure evaluators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureOptions {
    pub base: LogBase,
    /// Largest number of count vectors enumerated by the exact discrete path.
    pub enumeration_budget: u128,
    /// Trials used when a measure has to fall back to Monte Carlo.
    pub mc_trials: usize,
    pub seed: u64,
}

impl Default for MeasureOptions {
    fn default() -> Self {
        Self {
            base: LogBase::E,
            enumeration_budget: 2_000_000,
            mc_trials: 200_000,
            seed: 0x5eed,
        }
    }
}

impl MeasureOptions {
    pub fn with_base(base: LogBase) -> Self {
        Self {
            base,
            ..Self::default()
        }
    }
}

/// Evaluates measure `m` of `s` given `v`.
pub fn measure(model: &SampleModel, m: Measure, s: &IndexSet, v: &IndexSet, opts: &MeasureOptions) -> Result<MeasureValue> {
    match m {
        Measure::R1 => r1(model, s, v, opts.base),
        Measure::R2 => r2_with(model, s, v, opts),
        Measure::R3 => r3_with(model, s, v, opts),
    }
}

/// Single-index values `r_m(i)` for every i in 1..=n, evaluated in parallel.
pub fn profile(model: &SampleModel, m: Measure, opts: &MeasureOptions) -> Result<Vec<MeasureValue>> {
    (1..=model.n())
        .into_par_iter()
        .map(|i| measure(model, m, &IndexSet::singleton(i), &IndexSet::empty(), opts))
        .collect()
}

// ---------------------------------------------------------------- r1

/// Conditional entropy H(X_(S) | X_(V)).
pub fn r1(model: &SampleModel, s: &IndexSet, v: &IndexSet, base: LogBase) -> Result<MeasureValue> {
    model.check_pair(s, v)?;
    let unit = base.unit();
    if !model.is_discrete() {
        return Ok(MeasureValue::infinite(unit));
    }
    let joint = set_entropy_nats(model, &s.union(v))?;
    let cond = if v.is_empty() {
        joint
    } else {
        (joint - set_entropy_nats(model, v)?).max(0.0)
    };
    Ok(MeasureValue::exact(cond * base.from_nats(), unit))
}

/// Joint entropy H(X_(T)) in nats for a discrete parent.
pub fn set_entropy_nats(model: &SampleModel, t: &IndexSet) -> Result<f64> {
    let dist = model.discrete()?;
    model.check_set(t)?;
    if t.is_empty() {
        return Ok(0.0);
    }
    if t.len() == 1 {
        let marg = marginal_pmf(model, t.indices()[0])?;
        return Ok(marg.probs().iter().map(|p| xlogx_neg(*p)).collect::<KahanSum>().value());
    }
    let m = dist.len();
    let k = t.len();
    let mut cats = vec![0usize; k];
    let mut acc = KahanSum::new();
    for_each_nondecreasing(m, &mut cats, 0, 0, &mut |c| {
        let p = joint_pmf_categories(model, t, c).expect("validated set");
        acc.add(xlogx_neg(p));
    });
    Ok(acc.value())
}

fn for_each_nondecreasing(m: usize, cats: &mut [usize], pos: usize, min: usize, f: &mut impl FnMut(&[usize])) {
    if pos == cats.len() {
        f(cats);
        return;
    }
    for c in min..m {
        cats[pos] = c;
        for_each_nondecreasing(m, cats, pos + 1, c, f);
    }
}

// ---------------------------------------------------------------- r2

/// r2 with default options.
pub fn r2(model: &SampleModel, s: &IndexSet, v: &IndexSet) -> Result<MeasureValue> {
    r2_with(model, s, v, &MeasureOptions::default())
}

pub fn r2_with(model: &SampleModel, s: &IndexSet, v: &IndexSet, opts: &MeasureOptions) -> Result<MeasureValue> {
    model.check_pair(s, v)?;
    let unit = Unit::SquaredUnits;
    match model.parent() {
        crate::dist::Parent::Discrete(d) => {
            if s.len() == 1 && v.is_empty() {
                return Ok(MeasureValue::exact(bayes_r2_singleton(model.n(), d, s.indices()[0]), unit));
            }
            if let Some(e) = enumerate_counts(model.n(), d, s, v, opts.enumeration_budget) {
                return Ok(MeasureValue::exact(e.r2, unit));
            }
            Ok(MeasureValue::estimated(mc_r2(model, s, v, opts.mc_trials, opts.seed)?, unit))
        }
        crate::dist::Parent::Continuous(c) => {
            if let Family::Uniform { a, b } = c.family() {
                return Ok(MeasureValue::exact(uniform_linear_r2(model.n(), b - a, s, v), unit));
            }
            if c.mean().is_none() {
                return Ok(MeasureValue::infinite(unit));
            }
            if s.len() == 1 && v.is_empty() {
                return Ok(match quadrature_r2_singleton(model.n(), c, s.indices()[0]) {
                    Some(x) => MeasureValue::exact(x, unit),
                    None => MeasureValue::infinite(unit),
                });
            }
            Ok(MeasureValue::estimated(mc_r2(model, s, v, opts.mc_trials, opts.seed)?, unit))
        }
    }
}

/// n Var(E[X_1 | X_(i)]) by pinning one sample: with Y the other n-1
/// samples, P(X_(i) <= s | X_1 = x) is P(Bin(n-1, F(s)) >= i-1) if x <= s
/// and P(Bin(n-1, F(s)) >= i) otherwise.
fn bayes_r2_singleton(n: usize, dist: &DiscreteDist, i: usize) -> f64 {
    let m = dist.len();
    let mu = dist.mean();
    let centered: Vec<f64> = dist.support().iter().map(|x| x - mu).collect();
    let probs = dist.probs();
    // cond_cdf[a][u] = P(X_(i) <= s_u | X_1 = s_a)
    let tails: Vec<(f64, f64)> = (0..m)
        .map(|u| {
            let b = BinomialRef::new(n - 1, dist.cdf_at(u));
            (b.upper_tail(i - 1), b.upper_tail(i))
        })
        .collect();
    let mut acc = KahanSum::new();
    for u in 0..m {
        let mut mass = KahanSum::new();
        let mut weighted = KahanSum::new();
        for a in 0..m {
            let at = |w: usize| if a <= w { tails[w].0 } else { tails[w].1 };
            let cond = at(u) - if u == 0 { 0.0 } else { at(u - 1) };
            let joint = probs[a] * cond.max(0.0);
            mass.add(joint);
            weighted.add(centered[a] * joint);
        }
        let (pm, w) = (mass.value(), weighted.value());
        if pm > 0.0 {
            acc.add(w * w / pm);
        }
    }
    n as f64 * acc.value()
}

/// n Var(m(X_(i))) with m(x) = E[Xbar | X_(i) = x] built from truncated means.
fn quadrature_r2_singleton(n: usize, dist: &ContinuousDist, i: usize) -> Option<f64> {
    let mu = dist.mean()?;
    let (_, scale) = dist.location_scale();
    let nf = n as f64;
    let g = |x: f64| -> f64 {
        let below = if i > 1 {
            (i - 1) as f64 * dist.truncated_mean(f64::NEG_INFINITY, x).unwrap_or(x)
        } else {
            0.0
        };
        let above = if i < n {
            (n - i) as f64 * dist.truncated_mean(x, f64::INFINITY).unwrap_or(x)
        } else {
            0.0
        };
        let d = ((x + below + above) / nf - mu) / scale;
        d * d
    };
    let v = order_stat_expectation(dist, n, i, g)?;
    Some(nf * v * scale * scale)
}

// ---------------------------------------------------------------- r3

/// r3 with default options.
pub fn r3(model: &SampleModel, s: &IndexSet, v: &IndexSet) -> Result<MeasureValue> {
    r3_with(model, s, v, &MeasureOptions::default())
}

pub fn r3_with(model: &SampleModel, s: &IndexSet, v: &IndexSet, opts: &MeasureOptions) -> Result<MeasureValue> {
    model.check_pair(s, v)?;
    let unit = Unit::SquaredUnits;
    match model.parent() {
        crate::dist::Parent::Discrete(d) => {
            if v.is_empty() {
                let mut acc = KahanSum::new();
                for &i in s.indices() {
                    let marg = marginal_pmf(model, i)?;
                    acc.add(marg.variance());
                }
                return Ok(MeasureValue::exact(acc.value(), unit));
            }
            if let Some(e) = enumerate_counts(model.n(), d, s, v, opts.enumeration_budget) {
                return Ok(MeasureValue::exact(e.r3, unit));
            }
            Ok(MeasureValue::estimated(mc_r3(model, s, v, opts.mc_trials, opts.seed)?, unit))
        }
        crate::dist::Parent::Continuous(c) => {
            if let Family::Uniform { a, b } = c.family() {
                return Ok(MeasureValue::exact(uniform_linear_r3(model.n(), b - a, s, v), unit));
            }
            if v.is_empty() {
                let mut acc = KahanSum::new();
                for &i in s.indices() {
                    match order_stat_variance(c, model.n(), i) {
                        Some(x) => acc.add(x),
                        None => return Ok(MeasureValue::infinite(unit)),
                    }
                }
                return Ok(MeasureValue::exact(acc.value(), unit));
            }
            Ok(MeasureValue::estimated(mc_r3(model, s, v, opts.mc_trials, opts.seed)?, unit))
        }
    }
}

/// Var(X_(i)) by quadrature in u = F(x); `None` if the second moment diverges.
pub fn order_stat_variance(dist: &ContinuousDist, n: usize, i: usize) -> Option<f64> {
    let (loc, scale) = dist.location_scale();
    let mean = order_stat_expectation(dist, n, i, |x| (x - loc) / scale)?;
    let second = order_stat_expectation(dist, n, i, |x| {
        let d = (x - loc) / scale - mean;
        d * d
    })?;
    Some(second * scale * scale)
}

/// E[g(X_(i))] as the integral of g(Q(u)) against the Beta(i, n-i+1) density.
fn order_stat_expectation<G: Fn(f64) -> f64>(dist: &ContinuousDist, n: usize, i: usize, g: G) -> Option<f64> {
    let lf = ln_factorials(n);
    let ln_c = lf[n] - lf[i - 1] - lf[n - i];
    let (a, b) = ((i - 1) as f64, (n - i) as f64);
    let weight = |ln_u: f64, ln_1mu: f64| (ln_c + a * ln_u + b * ln_1mu).exp();
    let r = integrate_unit_interval(
        |u| {
            let w = weight(u.ln(), (-u).ln_1p());
            if w == 0.0 {
                0.0
            } else {
                g(dist.quantile(u)) * w
            }
        },
        |v| {
            let w = weight((-v).ln_1p(), v.ln());
            if w == 0.0 {
                0.0
            } else {
                g(dist.quantile_upper(v)) * w
            }
        },
    );
    match r {
        TailIntegral::Finite(x) if x.is_finite() => Some(x),
        _ => None,
    }
}

// ------------------------------------------- uniform parents: linear route

/// Covariance of uniform order statistics, i <= j, for a range of width w.
fn uniform_cov(n: usize, w: f64, i: usize, j: usize) -> f64 {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    let nf = n as f64;
    w * w * (i as f64) * ((n - j + 1) as f64) / ((nf + 1.0) * (nf + 1.0) * (nf + 2.0))
}

/// Neighbouring conditioning positions of `i` (0 and n+1 at the ends).
fn neighbours(n: usize, cond: &[usize], i: usize) -> (usize, usize) {
    let pos = cond.partition_point(|&c| c < i);
    let lo = if pos == 0 { 0 } else { cond[pos - 1] };
    let hi = cond.get(pos).copied().unwrap_or(n + 1);
    (lo, hi)
}

/// Coefficients of E[Xbar | X_(W)] on Y_0 = a, Y_k = X_(k), Y_{n+1} = b.
fn uniform_mean_coeffs(n: usize, w: &[usize]) -> Vec<f64> {
    let mut beta = vec![0.0; n + 2];
    for k in 1..=n {
        if w.binary_search(&k).is_ok() {
            beta[k] += 1.0;
            continue;
        }
        let (lo, hi) = neighbours(n, w, k);
        let span = (hi - lo) as f64;
        beta[lo] += (hi - k) as f64 / span;
        beta[hi] += (k - lo) as f64 / span;
    }
    beta.iter_mut().for_each(|b| *b /= n as f64);
    beta
}

fn uniform_quad_form(n: usize, w: f64, gamma: &[f64]) -> f64 {
    let mut acc = KahanSum::new();
    for k in 1..=n {
        if gamma[k] == 0.0 {
            continue;
        }
        for l in 1..=n {
            if gamma[l] != 0.0 {
                acc.add(gamma[k] * gamma[l] * uniform_cov(n, w, k, l));
            }
        }
    }
    acc.value().max(0.0)
}

fn uniform_linear_r2(n: usize, w: f64, s: &IndexSet, v: &IndexSet) -> f64 {
    let t = s.union(v);
    let bt = uniform_mean_coeffs(n, t.indices());
    let bv = uniform_mean_coeffs(n, v.indices());
    let gamma: Vec<f64> = bt.iter().zip(&bv).map(|(a, b)| a - b).collect();
    n as f64 * uniform_quad_form(n, w, &gamma)
}

fn uniform_linear_r3(n: usize, w: f64, s: &IndexSet, v: &IndexSet) -> f64 {
    let mut acc = KahanSum::new();
    for &i in s.indices() {
        let mut gamma = vec![0.0; n + 2];
        gamma[i] = 1.0;
        let (lo, hi) = neighbours(n, v.indices(), i);
        let span = (hi - lo) as f64;
        gamma[lo] -= (hi - i) as f64 / span;
        gamma[hi] -= (i - lo) as f64 / span;
        acc.add(uniform_quad_form(n, w, &gamma));
    }
    acc.value()
}

// ------------------------------------------- discrete parents: count vectors

struct Enumerated {
    r2: f64,
    r3: f64,
}

/// Exact r2 and r3 by enumerating multinomial count vectors.
///
/// The sorted sample is determined by the category counts, so every order
/// statistic and the sample mean are functions of the count vector.
fn enumerate_counts(n: usize, dist: &DiscreteDist, s: &IndexSet, v: &IndexSet, budget: u128) -> Option<Enumerated> {
    let m = dist.len();
    if choose_u128(n + m - 1, m - 1) > budget {
        return None;
    }
    let t = s.union(v);
    let tidx = t.indices();
    let v_pos: Vec<usize> = v.indices().iter().map(|i| tidx.binary_search(i).unwrap()).collect();
    let s_pos: Vec<usize> = s.indices().iter().map(|i| tidx.binary_search(i).unwrap()).collect();
    let mu = dist.mean();
    let centered: Vec<f64> = dist.support().iter().map(|x| x - mu).collect();
    let ln_p: Vec<f64> = dist.probs().iter().map(|p| p.ln()).collect();
    let lf = ln_factorials(n);

    // key: categories of X_(T); value: (P, sum of P * centered mean)
    let mut groups: BTreeMap<Vec<u16>, (KahanSum, KahanSum)> = BTreeMap::new();
    let mut counts = vec![0usize; m];
    let mut key = vec![0u16; tidx.len()];
    for_each_composition(n, &mut counts, 0, &mut |c| {
        let mut lp = lf[n];
        for j in 0..m {
            if c[j] > 0 {
                if dist.probs()[j] == 0.0 {
                    return;
                }
                lp += c[j] as f64 * ln_p[j] - lf[c[j]];
            }
        }
        let p = lp.exp();
        let mut cum = 0usize;
        let mut cat = 0usize;
        for (slot, &i) in key.iter_mut().zip(tidx) {
            while cum + c[cat] < i {
                cum += c[cat];
                cat += 1;
            }
            *slot = cat as u16;
        }
        let mean = c.iter().zip(&centered).map(|(k, x)| *k as f64 * x).sum::<f64>() / n as f64;
        let e = groups.entry(key.clone()).or_default();
        e.0.add(p);
        e.1.add(p * mean);
    });

    // aggregate over V: P, sum P * mean, sum P * x_S
    let mut by_v: BTreeMap<Vec<u16>, (f64, f64, Vec<f64>)> = BTreeMap::new();
    for (k, (p, pm)) in &groups {
        let kv: Vec<u16> = v_pos.iter().map(|&q| k[q]).collect();
        let e = by_v.entry(kv).or_insert_with(|| (0.0, 0.0, vec![0.0; s_pos.len()]));
        let p = p.value();
        e.0 += p;
        e.1 += pm.value();
        for (slot, &q) in e.2.iter_mut().zip(&s_pos) {
            *slot += p * centered[k[q] as usize];
        }
    }
    let mut r2 = KahanSum::new();
    let mut r3 = KahanSum::new();
    for (k, (p, pm)) in &groups {
        let p = p.value();
        if p <= 0.0 {
            continue;
        }
        let kv: Vec<u16> = v_pos.iter().map(|&q| k[q]).collect();
        let (pv, pmv, xs) = &by_v[&kv];
        let d = pm.value() / p - pmv / pv;
        r2.add(p * d * d);
        for (sum_x, &q) in xs.iter().zip(&s_pos) {
            let e = centered[k[q] as usize] - sum_x / pv;
            r3.add(p * e * e);
        }
    }
    Some(Enumerated {
        r2: n as f64 * r2.value(),
        r3: r3.value(),
    })
}

fn for_each_composition(remaining: usize, counts: &mut [usize], pos: usize, f: &mut impl FnMut(&[usize])) {
    if pos + 1 == counts.len() {
        counts[pos] = remaining;
        f(counts);
        return;
    }
    for c in 0..=remaining {
        counts[pos] = c;
        for_each_composition(remaining - c, counts, pos + 1, f);
    }
}

// ---------------------------------------------------------------- r4/r5

/// Constant values (r4, r5) = (0, |S|) for continuous and (0, 0) for discrete parents.
pub fn degenerate_r4_r5(model: &SampleModel, s: &IndexSet) -> Result<(f64, f64)> {
    if s.is_empty() {
        return Err(Error::InvalidIndexSet("S must be nonempty".into()));
    }
    model.check_set(s)?;
    Ok(if model.is_discrete() {
        (0.0, 0.0)
    } else {
        (0.0, s.len() as f64)
    })
}

// ---------------------------------------------------------------- Monte Carlo

fn check_trials(trials: usize) -> Result<()> {
    if trials < MIN_TRIALS {
        return Err(Error::TooFewTrials {
            got: trials,
            min: MIN_TRIALS,
        });
    }
    Ok(())
}

/// Per-key tallies of a discrete simulation: count and sum of centered means.
/// Per key: trial count, sum and sum of squares of the centred sample mean.
#[derive(Debug, Clone, Copy, Default)]
struct KeyStats {
    count: u64,
    sum: f64,
    sum_sq: f64,
}

impl KeyStats {
    fn add(&mut self, other: &KeyStats) {
        self.count += other.count;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
    }
}

type Tally = BTreeMap<Vec<u16>, KeyStats>;

fn discrete_tally(model: &SampleModel, dist: &DiscreteDist, t: &IndexSet, trials: usize, seed: u64) -> Tally {
    let n = model.n();
    let mu = dist.mean();
    let centered: Vec<f64> = dist.support().iter().map(|x| x - mu).collect();
    let parts = montecarlo::run_chunks(trials, seed, |rng, len| {
        let mut tally: Tally = BTreeMap::new();
        let mut cats = vec![0u16; n];
        for _ in 0..len {
            for c in cats.iter_mut() {
                *c = dist.draw_category(rng) as u16;
            }
            cats.sort_unstable();
            let key: Vec<u16> = t.indices().iter().map(|&i| cats[i - 1]).collect();
            let mean = cats.iter().map(|&c| centered[c as usize]).sum::<f64>() / n as f64;
            let e = tally.entry(key).or_default();
            e.count += 1;
            e.sum += mean;
            e.sum_sq += mean * mean;
        }
        tally
    });
    let mut total: Tally = BTreeMap::new();
    for part in parts {
        for (k, stats) in part {
            total.entry(k).or_default().add(&stats);
        }
    }
    total
}

/// Mean and standard error of a per-trial contribution constant within keys.
fn keyed_estimate<F: Fn(&[u16]) -> f64>(tally: &Tally, trials: usize, contribution: F) -> Estimate {
    let nf = trials as f64;
    let mut sum = KahanSum::new();
    let mut sum_sq = KahanSum::new();
    for (k, KeyStats { count: c, .. }) in tally {
        let x = contribution(k);
        sum.add(*c as f64 * x);
        sum_sq.add(*c as f64 * x * x);
    }
    let mean = sum.value() / nf;
    let var = ((sum_sq.value() - nf * mean * mean) / (nf - 1.0)).max(0.0);
    Estimate {
        value: mean,
        std_error: (var / nf).sqrt(),
    }
}

/// n * E[(E[Xbar | key] - E[Xbar | projected key])^2] from group means.
///
/// The standard error comes from the influence function
/// `n d_k^2 - theta + 2 n d_k (xbar - mu_k)`, which accounts for the noise in
/// the estimated group means; the projected means contribute nothing to first
/// order because they are weighted averages of the `mu_k`.
fn group_mean_gap_estimate(
    tally: &Tally,
    by_v: &BTreeMap<Vec<u16>, KeyStats>,
    v_pos: &[usize],
    n: f64,
    trials: usize,
) -> Estimate {
    let nf = trials as f64;
    let gap = |k: &[u16], st: &KeyStats| {
        let g = &by_v[&project(k, v_pos)];
        st.sum / st.count as f64 - g.sum / g.count as f64
    };
    let theta = tally
        .iter()
        .map(|(k, st)| st.count as f64 * n * gap(k, st).powi(2))
        .collect::<KahanSum>()
        .value()
        / nf;
    let mut sq = KahanSum::new();
    for (k, st) in tally {
        let c = st.count as f64;
        let d = gap(k, st);
        let mu = st.sum / c;
        let a = n * d * d - theta;
        let b = 2.0 * n * d;
        let within = (st.sum_sq - c * mu * mu).max(0.0);
        sq.add(c * a * a + b * b * within);
    }
    Estimate {
        value: theta,
        std_error: (sq.value().max(0.0) / (nf * (nf - 1.0))).sqrt(),
    }
}

fn project(key: &[u16], pos: &[usize]) -> Vec<u16> {
    pos.iter().map(|&q| key[q]).collect()
}

fn positions(t: &IndexSet, sub: &IndexSet) -> Vec<usize> {
    sub.indices().iter().map(|i| t.indices().binary_search(i).unwrap()).collect()
}

/// Plug-in estimate of H(X_(S) | X_(V)).
pub fn mc_r1(model: &SampleModel, s: &IndexSet, v: &IndexSet, trials: usize, seed: u64, base: LogBase) -> Result<Estimate> {
    model.check_pair(s, v)?;
    check_trials(trials)?;
    let dist = model.discrete()?;
    let t = s.union(v);
    let tally = discrete_tally(model, dist, &t, trials, seed);
    let v_pos = positions(&t, v);
    let mut v_counts: BTreeMap<Vec<u16>, u64> = BTreeMap::new();
    for (k, KeyStats { count: c, .. }) in &tally {
        *v_counts.entry(project(k, &v_pos)).or_insert(0) += c;
    }
    let scale = base.from_nats();
    let e = keyed_estimate(&tally, trials, |k| {
        let ct = tally[k].count as f64;
        let cv = v_counts[&project(k, &v_pos)] as f64;
        -(ct / cv).ln() * scale
    });
    Ok(e)
}

/// Monte Carlo estimate of r2.
///
/// Discrete parents use group means over the simulated keys. Continuous
/// parents use the exact conditional mean given the conditioning order
/// statistics, which only needs truncated means of the parent.
pub fn mc_r2(model: &SampleModel, s: &IndexSet, v: &IndexSet, trials: usize, seed: u64) -> Result<Estimate> {
    model.check_pair(s, v)?;
    check_trials(trials)?;
    let n = model.n();
    let t = s.union(v);
    match model.parent() {
        crate::dist::Parent::Discrete(dist) => {
            let tally = discrete_tally(model, dist, &t, trials, seed);
            let v_pos = positions(&t, v);
            let mut by_v: BTreeMap<Vec<u16>, KeyStats> = BTreeMap::new();
            for (k, stats) in &tally {
                by_v.entry(project(k, &v_pos)).or_default().add(stats);
            }
            Ok(group_mean_gap_estimate(&tally, &by_v, &v_pos, n as f64, trials))
        }
        crate::dist::Parent::Continuous(dist) => {
            if dist.mean().is_none() {
                return Ok(Estimate {
                    value: f64::INFINITY,
                    std_error: 0.0,
                });
            }
            let (loc, _) = dist.location_scale();
            let parts = montecarlo::run_chunks(trials, seed, |rng, len| {
                let mut acc = MeanAccumulator::default();
                let mut buf = Vec::with_capacity(n);
                for _ in 0..len {
                    model.draw_sorted(rng, &mut buf);
                    let et = conditional_sample_mean(dist, &buf, t.indices(), loc);
                    let ev = conditional_sample_mean(dist, &buf, v.indices(), loc);
                    let d = et - ev;
                    acc.push(n as f64 * d * d);
                }
                acc
            });
            Ok(montecarlo::merge_means(&parts).estimate())
        }
    }
}

/// E[Xbar | X_(W)] - loc for a sorted continuous sample.
fn conditional_sample_mean(dist: &ContinuousDist, sorted: &[f64], w: &[usize], loc: f64) -> f64 {
    let n = sorted.len();
    let mut acc = KahanSum::new();
    let mut prev = 0usize;
    let mut lo = f64::NEG_INFINITY;
    for &i in w.iter().chain(std::iter::once(&(n + 1))) {
        let hi = if i <= n { sorted[i - 1] } else { f64::INFINITY };
        let gap = i - prev - 1;
        if gap > 0 {
            let m = dist.truncated_mean(lo, hi).unwrap_or(f64::NAN);
            acc.add(gap as f64 * (m - loc));
        }
        if i <= n {
            acc.add(hi - loc);
        }
        prev = i;
        lo = hi;
    }
    acc.value() / n as f64
}

/// Monte Carlo estimate of r3.
///
/// Continuous parents use E[Var(X_(i) | X_(V))] = E[(X_(i) - X'_(i))^2] / 2
/// with X'_(i) redrawn given the neighbouring conditioning order statistics.
/// Discrete parents use group means over the conditioning keys.
pub fn mc_r3(model: &SampleModel, s: &IndexSet, v: &IndexSet, trials: usize, seed: u64) -> Result<Estimate> {
    model.check_pair(s, v)?;
    check_trials(trials)?;
    let n = model.n();
    match model.parent() {
        crate::dist::Parent::Discrete(dist) => {
            let t = s.union(v);
            let tally = discrete_tally(model, dist, &t, trials, seed);
            let v_pos = positions(&t, v);
            let s_pos = positions(&t, s);
            let mu = dist.mean();
            let x = |c: u16| dist.support()[c as usize] - mu;
            let mut by_v: BTreeMap<Vec<u16>, (u64, Vec<f64>)> = BTreeMap::new();
            for (k, KeyStats { count: c, .. }) in &tally {
                let e = by_v
                    .entry(project(k, &v_pos))
                    .or_insert_with(|| (0, vec![0.0; s_pos.len()]));
                e.0 += c;
                for (slot, &q) in e.1.iter_mut().zip(&s_pos) {
                    *slot += *c as f64 * x(k[q]);
                }
            }
            Ok(keyed_estimate(&tally, trials, |k| {
                let (cv, sums) = &by_v[&project(k, &v_pos)];
                sums.iter()
                    .zip(&s_pos)
                    .map(|(sum, &q)| {
                        let d = x(k[q]) - sum / *cv as f64;
                        d * d
                    })
                    .sum()
            }))
        }
        crate::dist::Parent::Continuous(dist) => {
            let (loc, _) = dist.location_scale();
            let parts = montecarlo::run_chunks(trials, seed, |rng, len| {
                let mut acc = MeanAccumulator::default();
                let mut buf = Vec::with_capacity(n);
                let mut fresh = Vec::with_capacity(n);
                for _ in 0..len {
                    model.draw_sorted(rng, &mut buf);
                    let mut total = 0.0;
                    for &i in s.indices() {
                        let (lo, hi) = neighbours(n, v.indices(), i);
                        let xl = if lo == 0 { f64::NEG_INFINITY } else { buf[lo - 1] };
                        let xh = if hi == n + 1 { f64::INFINITY } else { buf[hi - 1] };
                        let redraw = redraw_order_stat(dist, rng, &mut fresh, hi - lo - 1, i - lo, xl, xh);
                        let d = (buf[i - 1] - loc) - (redraw - loc);
                        total += 0.5 * d * d;
                    }
                    acc.push(total);
                }
                acc
            });
            Ok(montecarlo::merge_means(&parts).estimate())
        }
    }
}

/// The `r`-th smallest of `count` draws from the parent truncated to (lo, hi).
fn redraw_order_stat<R: Rng + ?Sized>(
    dist: &ContinuousDist,
    rng: &mut R,
    buf: &mut Vec<f64>,
    count: usize,
    r: usize,
    lo: f64,
    hi: f64,
) -> f64 {
    buf.clear();
    buf.extend((0..count).map(|_| open_unit(rng)));
    buf.sort_unstable_by(f64::total_cmp);
    let w = buf[r - 1];
    let (loc, _) = dist.location_scale();
    if lo >= loc {
        // upper side: interpolate survival probabilities
        let (sl, sh) = (dist.sf(lo), dist.sf(hi));
        let target = sl - w * (sl - sh);
        dist.quantile_upper(target).clamp(lo, hi)
    } else {
        let (fl, fh) = (dist.cdf(lo), dist.cdf(hi));
        let target = fl + w * (fh - fl);
        dist.quantile(target).clamp(lo, hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::Parent;

    fn bern(p: f64, n: usize) -> SampleModel {
        SampleModel::new(n, DiscreteDist::bernoulli(p).unwrap()).unwrap()
    }

    fn uni(n: usize) -> SampleModel {
        SampleModel::new(n, ContinuousDist::uniform(0.0, 1.0).unwrap()).unwrap()
    }

    fn set(v: &[usize]) -> IndexSet {
        IndexSet::new(v.to_vec()).unwrap()
    }

    fn e() -> IndexSet {
        IndexSet::empty()
    }

    #[test]
    fn r1_examples() {
        let v = r1(&bern(0.5, 1), &set(&[1]), &e(), LogBase::E).unwrap();
        assert!((v.value - std::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(v.unit, Unit::Nats);
        let sp = SampleModel::new(16, DiscreteDist::salt_pepper(150.0, 0.3, 0.05).unwrap()).unwrap();
        let v = r1(&sp, &set(&[1]), &e(), LogBase::Two).unwrap();
        assert!((v.value - 0.750560233063741).abs() < 1e-9);
        let v = r1(&sp, &set(&[12]), &e(), LogBase::Two).unwrap();
        assert!((v.value - 0.999970726780352).abs() < 1e-9);
        let c = r1(&uni(3), &set(&[1]), &e(), LogBase::E).unwrap();
        assert!(c.value.is_infinite());
    }

    #[test]
    fn r1_overlap_is_an_error() {
        assert!(matches!(
            r1(&bern(0.5, 4), &set(&[1, 2]), &set(&[2]), LogBase::E),
            Err(Error::OverlappingSets(2))
        ));
    }

    #[test]
    fn r1_bits_is_nats_over_ln2() {
        let m = SampleModel::new(7, DiscreteDist::salt_pepper(90.0, 0.4, 0.3).unwrap()).unwrap();
        for i in 1..=7 {
            let a = r1(&m, &set(&[i]), &set(&[(i % 7) + 1]), LogBase::E).unwrap().value;
            let b = r1(&m, &set(&[i]), &set(&[(i % 7) + 1]), LogBase::Two).unwrap().value;
            assert_eq!(b, a * (1.0 / std::f64::consts::LN_2));
        }
    }

    #[test]
    fn conditioning_reduces_entropy() {
        let m = SampleModel::new(9, DiscreteDist::salt_pepper(60.0, 0.5, 0.4).unwrap()).unwrap();
        for i in 1..=9 {
            let plain = r1(&m, &set(&[i]), &e(), LogBase::E).unwrap().value;
            for j in (1..=9).filter(|j| *j != i) {
                let cond = r1(&m, &set(&[i]), &set(&[j]), LogBase::E).unwrap().value;
                assert!(cond <= plain + 1e-10);
            }
        }
    }

    #[test]
    fn r2_examples() {
        for p in [0.2, 0.5, 0.9] {
            let v = r2(&bern(p, 1), &set(&[1]), &e()).unwrap().value;
            assert!((v - p * (1.0 - p)).abs() < 1e-15);
        }
        let v = r2(&uni(5), &set(&[3]), &e()).unwrap().value;
        assert!((v - 9.0 / 140.0).abs() < 1e-15);
    }

    #[test]
    fn r3_examples() {
        let v = r3(&uni(5), &set(&[3]), &e()).unwrap().value;
        assert!((v - 1.0 / 28.0).abs() < 1e-15);
        for p in [0.3, 0.5] {
            let v = r3(&bern(p, 1), &set(&[1]), &e()).unwrap().value;
            assert!((v - p * (1.0 - p)).abs() < 1e-15);
        }
        let c = SampleModel::new(25, ContinuousDist::cauchy(0.0, 0.0002).unwrap()).unwrap();
        assert!(r3(&c, &set(&[1]), &e()).unwrap().value.is_infinite());
        assert!(r3(&c, &set(&[25]), &e()).unwrap().value.is_infinite());
        assert!(r3(&c, &set(&[13]), &e()).unwrap().value.is_finite());
    }

    #[test]
    fn r2_singleton_bayes_matches_enumeration() {
        let m = SampleModel::new(11, DiscreteDist::salt_pepper(40.0, 0.35, 0.6).unwrap()).unwrap();
        let d = m.discrete().unwrap();
        for i in 1..=11 {
            let a = bayes_r2_singleton(11, d, i);
            let b = enumerate_counts(11, d, &set(&[i]), &e(), u128::MAX).unwrap().r2;
            assert!((a - b).abs() < 1e-12 * a.max(1.0), "{i}: {a} {b}");
        }
    }

    #[test]
    fn r3_enumeration_matches_marginal_variance() {
        let m = SampleModel::new(8, DiscreteDist::salt_pepper(40.0, 0.35, 0.6).unwrap()).unwrap();
        let d = m.discrete().unwrap();
        for i in 1..=8 {
            let a = r3(&m, &set(&[i]), &e()).unwrap().value;
            let b = enumerate_counts(8, d, &set(&[i]), &e(), u128::MAX).unwrap().r3;
            assert!((a - b).abs() < 1e-9 * a.max(1.0));
        }
    }

    #[test]
    fn r2_bounded_by_total_variance() {
        let m = SampleModel::new(10, DiscreteDist::salt_pepper(100.0, 0.2, 0.5).unwrap()).unwrap();
        let var = m.discrete().unwrap().variance();
        for i in 1..=10 {
            let v = r2(&m, &set(&[i]), &e()).unwrap().value;
            assert!(v >= 0.0 && v <= 10.0 * var + 1e-9);
        }
    }

    #[test]
    fn shift_invariance() {
        let base = DiscreteDist::new(vec![-1.0, 0.5, 2.0], vec![0.3, 0.5, 0.2]).unwrap();
        let shifted = base.shifted(1234.5).unwrap();
        let (a, b) = (SampleModel::new(7, base).unwrap(), SampleModel::new(7, shifted).unwrap());
        for (s, v) in [(set(&[3]), e()), (set(&[2, 5]), set(&[4])), (set(&[1]), set(&[7]))] {
            for f in [r2, r3] {
                let x = f(&a, &s, &v).unwrap().value;
                let y = f(&b, &s, &v).unwrap().value;
                assert!((x - y).abs() < 1e-10, "{x} {y}");
            }
        }
    }

    #[test]
    fn bernoulli_symmetry_at_half() {
        let m = bern(0.5, 19);
        for i in 1..=19 {
            let j = 20 - i;
            let a = r1(&m, &set(&[i]), &e(), LogBase::E).unwrap().value;
            let b = r1(&m, &set(&[j]), &e(), LogBase::E).unwrap().value;
            assert!((a - b).abs() <= 1e-14);
            let a = r3(&m, &set(&[i]), &e()).unwrap().value;
            let b = r3(&m, &set(&[j]), &e()).unwrap().value;
            assert!((a - b).abs() <= 1e-14);
        }
    }

    #[test]
    fn uniform_conditional_r3_matches_formula() {
        // E[Var(X_(i) | neighbours l, u)] = r (g - r) / ((n+1)(n+2)(g)) with g = u - l... scaled
        let n = 7;
        let m = uni(n);
        for i in 1..=n {
            for j in (1..=n).filter(|j| *j != i) {
                let (l, u) = if j < i { (j, n + 1) } else { (0, j) };
                let g = (u - l) as f64;
                let r = (i - l) as f64;
                let want = r * (g - r) / ((n as f64 + 1.0) * (n as f64 + 2.0) * g);
                let got = r3(&m, &set(&[i]), &set(&[j])).unwrap().value;
                assert!((got - want).abs() < 1e-14, "{i}|{j}: {got} {want}");
            }
        }
    }

    #[test]
    fn uniform_quadrature_matches_closed_form() {
        let c = ContinuousDist::custom(
            "u01",
            |x: f64| if (0.0..=1.0).contains(&x) { 1.0 } else { 0.0 },
            |x: f64| x.clamp(0.0, 1.0),
            |u: f64| u,
        );
        let n = 6;
        for i in 1..=n {
            let v = order_stat_variance(&c, n, i).unwrap();
            let want = (i * (n + 1 - i)) as f64 / (49.0 * 8.0);
            assert!((v - want).abs() < 1e-10, "{i} {v} {want}");
            let r = quadrature_r2_singleton(n, &c, i).unwrap();
            let want = (i * (n + 1 - i)) as f64 / (4.0 * 6.0 * 8.0);
            assert!((r - want).abs() < 1e-9, "{i} {r} {want}");
        }
    }

    #[test]
    fn degenerate_measures() {
        assert_eq!(degenerate_r4_r5(&uni(5), &set(&[2, 3])).unwrap(), (0.0, 2.0));
        assert_eq!(degenerate_r4_r5(&bern(0.5, 5), &set(&[3])).unwrap(), (0.0, 0.0));
        assert_eq!(degenerate_r4_r5(&uni(5), &set(&[5])).unwrap(), (0.0, 1.0));
        assert!(degenerate_r4_r5(&uni(5), &e()).is_err());
    }

    #[test]
    fn monte_carlo_examples() {
        let e3 = mc_r3(&uni(5), &set(&[3]), &e(), 1_000_000, 1).unwrap();
        assert!(e3.covers(1.0 / 28.0, 3.0), "{e3:?}");
        let m = bern(0.5, 19);
        let exact = r1(&m, &set(&[10]), &e(), LogBase::Two).unwrap().value;
        let e1 = mc_r1(&m, &set(&[10]), &e(), 1_000_000, 2, LogBase::Two).unwrap();
        assert!(e1.covers(exact, 3.0), "{e1:?} {exact}");
        assert!(matches!(
            mc_r3(&uni(5), &set(&[3]), &e(), 10, 1),
            Err(Error::TooFewTrials { .. })
        ));
        assert!(mc_r1(&uni(5), &set(&[3]), &e(), 10_000, 1, LogBase::E).is_err());
    }

    #[test]
    fn monte_carlo_conditional_paths() {
        let m = uni(6);
        let exact = r2(&m, &set(&[2, 5]), &set(&[3])).unwrap().value;
        let est = mc_r2(&m, &set(&[2, 5]), &set(&[3]), 400_000, 5).unwrap();
        assert!(est.covers(exact, 3.0), "{est:?} {exact}");
        let exact = r3(&m, &set(&[2, 5]), &set(&[3])).unwrap().value;
        let est = mc_r3(&m, &set(&[2, 5]), &set(&[3]), 400_000, 6).unwrap();
        assert!(est.covers(exact, 3.0), "{est:?} {exact}");

        let d = SampleModel::new(9, DiscreteDist::salt_pepper(80.0, 0.4, 0.3).unwrap()).unwrap();
        let (s, v) = (set(&[4, 6]), set(&[5]));
        for (f, g) in [(r2 as fn(&_, &_, &_) -> _, mc_r2 as fn(&_, &_, &_, _, _) -> _), (r3, mc_r3)] {
            let exact = f(&d, &s, &v).unwrap().value;
            let est = g(&d, &s, &v, 400_000, 9).unwrap();
            assert!(est.covers(exact, 3.0), "{est:?} {exact}");
        }
        let exact = r1(&d, &s, &v, LogBase::E).unwrap().value;
        let est = mc_r1(&d, &s, &v, 400_000, 10, LogBase::E).unwrap();
        assert!(est.covers(exact, 3.0), "{est:?} {exact}");
    }

    #[test]
    fn fallback_attaches_standard_error() {
        let m = SampleModel::new(30, DiscreteDist::salt_pepper(80.0, 0.4, 0.3).unwrap()).unwrap();
        let opts = MeasureOptions {
            enumeration_budget: 10,
            mc_trials: 20_000,
            ..MeasureOptions::default()
        };
        let v = r3_with(&m, &set(&[10]), &set(&[20]), &opts).unwrap();
        assert!(v.std_error.is_some());
        let exact = r3(&m, &set(&[10]), &set(&[20])).unwrap();
        assert!(exact.is_exact());
        assert!((v.value - exact.value).abs() < 4.0 * v.std_error.unwrap());
    }

    #[test]
    fn profile_matches_sequential_evaluation() {
        let m = SampleModel::new(9, Parent::from(DiscreteDist::salt_pepper(80.0, 0.4, 0.3).unwrap())).unwrap();
        let opts = MeasureOptions::with_base(LogBase::Two);
        let par = profile(&m, Measure::R1, &opts).unwrap();
        let seq: Vec<_> = (1..=9)
            .map(|i| r1(&m, &set(&[i]), &e(), LogBase::Two).unwrap())
            .collect();
        assert_eq!(par, seq);
    }
}
