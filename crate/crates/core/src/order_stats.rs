//! Distributions of order statistics.
//!
//! Discrete parents have three exact evaluators of the joint pmf of a set of
//! order statistics: an inclusion-exclusion sum over threshold events
//! ([`joint_pmf`]), a dynamic program over cumulative category counts
//! ([`joint_pmf_counts`], the production path) and exhaustive enumeration of
//! raw samples ([`brute_force_joint_pmf`], small instances only).

use std::collections::HashMap;

use crate::dist::{ContinuousDist, DiscreteDist, Parent};
use crate::error::{Error, Result};
use crate::montecarlo::{self, Estimate, MeanAccumulator};
use crate::numeric::{binomial_pmf, ln_factorials, pascal_triangle, KahanSum};

/// Largest raw-sample count the brute-force oracle will enumerate.
pub const BRUTE_FORCE_LIMIT: u128 = 10_000_000;

/// A parent distribution together with a sample size.
#[derive(Debug, Clone)]
pub struct SampleModel {
    n: usize,
    parent: Parent,
}

impl SampleModel {
    pub fn new(n: usize, parent: impl Into<Parent>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("sample size n must be >= 1".into()));
        }
        Ok(Self {
            n,
            parent: parent.into(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn parent(&self) -> &Parent {
        &self.parent
    }

    pub fn is_discrete(&self) -> bool {
        self.parent.is_discrete()
    }

    pub fn discrete(&self) -> Result<&DiscreteDist> {
        self.parent.as_discrete().ok_or(Error::RequiresDiscrete)
    }

    pub fn continuous(&self) -> Result<&ContinuousDist> {
        self.parent.as_continuous().ok_or(Error::RequiresContinuous)
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n {
            return Err(Error::InvalidIndexSet(format!(
                "index {i} outside [1, {}]",
                self.n
            )));
        }
        Ok(())
    }

    pub fn check_set(&self, set: &IndexSet) -> Result<()> {
        match set.indices().last() {
            Some(&last) if last > self.n => Err(Error::InvalidIndexSet(format!(
                "index {last} outside [1, {}]",
                self.n
            ))),
            _ => Ok(()),
        }
    }

    /// Validates a measured set `s` and a conditioning set `v`.
    pub fn check_pair(&self, s: &IndexSet, v: &IndexSet) -> Result<()> {
        if s.is_empty() {
            return Err(Error::InvalidIndexSet("S must be nonempty".into()));
        }
        self.check_set(s)?;
        self.check_set(v)?;
        if let Some(i) = s.indices().iter().find(|i| v.contains(**i)) {
            return Err(Error::OverlappingSets(*i));
        }
        Ok(())
    }

    /// Sorted sample of size n drawn with `rng`.
    pub fn draw_sorted<R: rand::Rng + ?Sized>(&self, rng: &mut R, buf: &mut Vec<f64>) {
        montecarlo::sorted_sample(buf, self.n, || self.parent.draw(rng));
    }
}

/// Strictly ascending 1-based order-statistic indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    /// Builds a set from indices in any order; rejects 0 and duplicates.
    pub fn new(mut indices: Vec<usize>) -> Result<Self> {
        if indices.contains(&0) {
            return Err(Error::InvalidIndexSet("indices are 1-based".into()));
        }
        indices.sort_unstable();
        if let Some(w) = indices.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidIndexSet(format!("duplicate index {}", w[0])));
        }
        Ok(Self(indices))
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn singleton(i: usize) -> Self {
        assert!(i >= 1, "indices are 1-based");
        Self(vec![i])
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    /// Set with `i` added.
    pub fn with(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        if let Err(pos) = v.binary_search(&i) {
            v.insert(pos, i);
        }
        Self(v)
    }

    pub fn union(&self, other: &IndexSet) -> Self {
        let mut v: Vec<usize> = self.0.iter().chain(&other.0).copied().collect();
        v.sort_unstable();
        v.dedup();
        Self(v)
    }
}

impl TryFrom<Vec<usize>> for IndexSet {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        IndexSet::new(v)
    }
}

/// Maps values to support categories; `None` if any value is off support or
/// the values are not nondecreasing.
fn categories_of(dist: &DiscreteDist, values: &[f64]) -> Option<Vec<usize>> {
    let cats: Vec<usize> = values
        .iter()
        .map(|v| dist.category_of(*v))
        .collect::<Option<_>>()?;
    cats.windows(2).all(|w| w[0] <= w[1]).then_some(cats)
}

fn check_aligned(s: &IndexSet, values: &[f64]) -> Result<()> {
    if s.len() != values.len() {
        return Err(Error::LengthMismatch {
            expected: s.len(),
            got: values.len(),
        });
    }
    if s.is_empty() {
        return Err(Error::InvalidIndexSet("S must be nonempty".into()));
    }
    Ok(())
}

/// Distribution of X_(i) on the parent support.
pub fn marginal_pmf(model: &SampleModel, i: usize) -> Result<DiscreteDist> {
    let dist = model.discrete()?;
    model.check_index(i)?;
    let s = IndexSet::singleton(i);
    let probs: Vec<f64> = (0..dist.len())
        .map(|j| counts_dp(model.n, dist, s.indices(), &[j]))
        .collect();
    let total: f64 = probs.iter().sum();
    let probs = probs.into_iter().map(|p| p / total).collect();
    DiscreteDist::new(dist.support().to_vec(), probs)
}

/// Joint pmf of X_(S) at `values`, by inclusion-exclusion over strict and
/// non-strict threshold events.
pub fn joint_pmf(model: &SampleModel, s: &IndexSet, values: &[f64]) -> Result<f64> {
    let dist = model.discrete()?;
    model.check_set(s)?;
    check_aligned(s, values)?;
    let Some(cats) = categories_of(dist, values) else {
        return Ok(0.0);
    };
    let n = model.n;
    let k = s.len();
    let idx = s.indices();
    let at = |j: usize| dist.cdf_at(j);
    let before = |j: usize| if j == 0 { 0.0 } else { dist.cdf_at(j - 1) };
    let binom = pascal_triangle(n);
    let mut memo: HashMap<Vec<u64>, f64> = HashMap::new();
    let mut total = KahanSum::new();
    for mask in 0u32..(1u32 << k) {
        let mut theta: Vec<f64> = (0..k)
            .map(|j| {
                if mask & (1 << j) != 0 {
                    before(cats[j])
                } else {
                    at(cats[j])
                }
            })
            .collect();
        // X_(i_j) <= X_(i_m) for j < m, so each threshold may be capped by
        // every later one without changing the event
        for j in (0..k.saturating_sub(1)).rev() {
            theta[j] = theta[j].min(theta[j + 1]);
        }
        let key: Vec<u64> = theta.iter().map(|t| t.to_bits()).collect();
        let term = *memo
            .entry(key)
            .or_insert_with(|| lower_threshold_prob(n, idx, &theta, &binom));
        if mask.count_ones() % 2 == 0 {
            total.add(term);
        } else {
            total.add(-term);
        }
    }
    Ok(total.value().clamp(0.0, 1.0))
}

/// P(X_(i_j) <= threshold j for every j) for nondecreasing cdf thresholds.
///
/// `t[j]` counts samples with cdf level in `(theta_j, theta_{j+1}]`
/// (`theta_{k+1} = 1`); the event holds iff at most `n - i_j` samples lie
/// above `theta_j`, i.e. `sum_{m >= j} t[m] <= n - i_j`.
fn lower_threshold_prob(n: usize, idx: &[usize], theta: &[f64], binom: &[Vec<f64>]) -> f64 {
    let k = idx.len();
    let mut gaps: Vec<f64> = (0..k)
        .map(|j| {
            let next = if j + 1 < k { theta[j + 1] } else { 1.0 };
            (next - theta[j]).max(0.0)
        })
        .collect();
    gaps.push(theta[0]);
    let mut t = vec![0usize; k];
    let mut acc = KahanSum::new();
    enumerate_t(n, idx, &gaps, binom, k, 0, 1.0, &mut t, &mut acc);
    acc.value()
}

#[allow(clippy::too_many_arguments)]
fn enumerate_t(
    n: usize,
    idx: &[usize],
    gaps: &[f64],
    binom: &[Vec<f64>],
    j: usize,
    above: usize,
    weight: f64,
    t: &mut [usize],
    acc: &mut KahanSum,
) {
    if j == 0 {
        let rest = n - above;
        let base = gaps[idx.len()];
        acc.add(weight * pow_usize(base, rest));
        return;
    }
    let jj = j - 1;
    let cap = n - idx[jj];
    if above > cap {
        return;
    }
    let gap = gaps[jj];
    for tj in 0..=(cap - above) {
        let factor = binom[n - above][tj] * pow_usize(gap, tj);
        if factor == 0.0 {
            // gap^tj is zero for every larger tj as well
            if tj > 0 {
                break;
            }
            continue;
        }
        t[jj] = tj;
        enumerate_t(n, idx, gaps, binom, jj, above + tj, weight * factor, t, acc);
    }
}

fn pow_usize(x: f64, e: usize) -> f64 {
    if e == 0 {
        1.0
    } else {
        x.powi(e as i32)
    }
}

/// Joint pmf of X_(S) at `values` via cumulative category counts.
pub fn joint_pmf_counts(model: &SampleModel, s: &IndexSet, values: &[f64]) -> Result<f64> {
    let dist = model.discrete()?;
    model.check_set(s)?;
    check_aligned(s, values)?;
    Ok(match categories_of(dist, values) {
        Some(cats) => counts_dp(model.n, dist, s.indices(), &cats),
        None => 0.0,
    })
}

/// Same as [`joint_pmf_counts`] with values given as support categories.
pub fn joint_pmf_categories(model: &SampleModel, s: &IndexSet, cats: &[usize]) -> Result<f64> {
    let dist = model.discrete()?;
    model.check_set(s)?;
    if cats.len() != s.len() {
        return Err(Error::LengthMismatch {
            expected: s.len(),
            got: cats.len(),
        });
    }
    if cats.iter().any(|c| *c >= dist.len()) || cats.windows(2).any(|w| w[0] > w[1]) {
        return Ok(0.0);
    }
    Ok(counts_dp(model.n, dist, s.indices(), cats))
}

/// Dynamic program over C_j = #{samples in categories 0..=j}.
///
/// X_(i) falls in category c iff C_{c-1} < i <= C_c, so each requested
/// order statistic bounds two cumulative counts. Given C_{j-1}, the count
/// in category j is Binomial(n - C_{j-1}, p_j / P(X >= s_j)).
fn counts_dp(n: usize, dist: &DiscreteDist, idx: &[usize], cats: &[usize]) -> f64 {
    let last = *cats.last().expect("nonempty");
    let mut lower = vec![0usize; last + 1];
    let mut upper = vec![n; last + 1];
    for (&i, &c) in idx.iter().zip(cats) {
        lower[c] = lower[c].max(i);
        if c > 0 {
            upper[c - 1] = upper[c - 1].min(i - 1);
        }
    }
    let mut state = vec![0.0; n + 1];
    state[0] = 1.0;
    for j in 0..=last {
        let tail = dist.upper_at(j);
        let q = if tail > 0.0 {
            (dist.probs()[j] / tail).min(1.0)
        } else {
            0.0
        };
        let mut next = vec![0.0; n + 1];
        for (c, &w) in state.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let pmf = binomial_pmf(n - c, q);
            let lo = lower[j].saturating_sub(c);
            let hi = upper[j].saturating_sub(c).min(n - c);
            if upper[j] < c {
                continue;
            }
            for (add, p) in pmf.iter().enumerate().take(hi + 1).skip(lo) {
                next[c + add] += w * p;
            }
        }
        state = next;
    }
    state.iter().copied().collect::<KahanSum>().value().clamp(0.0, 1.0)
}

/// Joint pmf by enumerating all `|support|^n` raw samples.
pub fn brute_force_joint_pmf(model: &SampleModel, s: &IndexSet, values: &[f64]) -> Result<f64> {
    let dist = model.discrete()?;
    model.check_set(s)?;
    check_aligned(s, values)?;
    let m = dist.len();
    let n = model.n;
    let total = (m as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > BRUTE_FORCE_LIMIT {
        return Err(Error::InstanceTooLarge(format!(
            "{m}^{n} raw samples exceed the brute-force limit of {BRUTE_FORCE_LIMIT}"
        )));
    }
    let Some(cats) = categories_of(dist, values) else {
        return Ok(0.0);
    };
    let probs = dist.probs();
    let mut digits = vec![0usize; n];
    let mut counts = vec![0usize; m];
    let mut acc = KahanSum::new();
    'outer: loop {
        counts.iter_mut().for_each(|c| *c = 0);
        let mut p = 1.0;
        for &d in &digits {
            counts[d] += 1;
            p *= probs[d];
        }
        if p > 0.0 && matches_order_stats(&counts, s.indices(), &cats) {
            acc.add(p);
        }
        for d in digits.iter_mut() {
            *d += 1;
            if *d < m {
                continue 'outer;
            }
            *d = 0;
        }
        break;
    }
    Ok(acc.value())
}

fn matches_order_stats(counts: &[usize], idx: &[usize], cats: &[usize]) -> bool {
    idx.iter().zip(cats).all(|(&i, &c)| {
        let below: usize = counts[..c].iter().sum();
        below < i && i <= below + counts[c]
    })
}

/// Joint density of X_(S) at strictly increasing `values`.
pub fn joint_pdf(model: &SampleModel, s: &IndexSet, values: &[f64]) -> Result<f64> {
    let dist = model.continuous()?;
    model.check_set(s)?;
    check_aligned(s, values)?;
    if values.windows(2).any(|w| w[0] >= w[1]) {
        return Ok(0.0);
    }
    let n = model.n;
    let lf = ln_factorials(n);
    let idx = s.indices();
    let mut log_density = lf[n];
    let mut prev_i = 0usize;
    let mut prev_x = f64::NEG_INFINITY;
    for (&i, &x) in idx.iter().zip(values) {
        let f = dist.pdf(x);
        if f <= 0.0 {
            return Ok(0.0);
        }
        log_density += f.ln();
        let gap = i - prev_i - 1;
        log_density -= lf[gap];
        if gap > 0 {
            let mass = dist.mass_between(prev_x, x);
            if mass <= 0.0 {
                return Ok(0.0);
            }
            log_density += gap as f64 * mass.ln();
        }
        prev_i = i;
        prev_x = x;
    }
    let gap = n - prev_i;
    log_density -= lf[gap];
    if gap > 0 {
        let mass = dist.sf(prev_x);
        if mass <= 0.0 {
            return Ok(0.0);
        }
        log_density += gap as f64 * mass.ln();
    }
    Ok(log_density.exp())
}

/// Monte Carlo probability of an event on the sorted sample.
pub fn mc_event_probability<E>(model: &SampleModel, trials: usize, seed: u64, event: E) -> Result<Estimate>
where
    E: Fn(&[f64]) -> bool + Sync,
{
    if trials == 0 {
        return Err(Error::TooFewTrials { got: 0, min: 1 });
    }
    let parts = montecarlo::run_chunks(trials, seed, |rng, len| {
        let mut acc = MeanAccumulator::default();
        let mut buf = Vec::with_capacity(model.n);
        for _ in 0..len {
            model.draw_sorted(rng, &mut buf);
            acc.push(if event(&buf) { 1.0 } else { 0.0 });
        }
        acc
    });
    Ok(montecarlo::merge_means(&parts).estimate())
}

/// Monte Carlo estimate of P(X_(S) = values).
pub fn mc_joint_estimate(
    model: &SampleModel,
    s: &IndexSet,
    values: &[f64],
    trials: usize,
    seed: u64,
) -> Result<Estimate> {
    model.check_set(s)?;
    check_aligned(s, values)?;
    let idx = s.indices().to_vec();
    mc_event_probability(model, trials, seed, |x| {
        idx.iter().zip(values).all(|(&i, v)| x[i - 1] == *v)
    })
}
