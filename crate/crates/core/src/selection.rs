//! Choosing informative subsets of order statistics.
//!
//! * marginal: rank single indices by r_m(i);
//! * joint: maximize r_m(S) over all k-subsets;
//! * sequential: greedily add the index with the largest conditional
//!   measure r_m(j | chosen so far).
//!
//! Scores closer than [`TIE_TOLERANCE`] (relative) are ties, resolved
//! toward the smaller index or the lexicographically smaller set.

use itertools::Itertools;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measures::{self, Measure, MeasureOptions, MeasureValue};
use crate::numeric::{choose_u128, KahanSum};
use crate::order_stats::{IndexSet, SampleModel};

/// Relative tolerance under which two scores are considered equal.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Default cap on the number of subsets examined by [`joint_select`].
pub const DEFAULT_SUBSET_BUDGET: u128 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Approach {
    Marginal,
    Joint,
    Sequential,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionResult {
    /// Selection order for marginal/sequential, ascending for joint.
    pub indices: Vec<usize>,
    /// Per-index scores: r_m(i) for marginal and joint, conditional gains for sequential.
    pub scores: Vec<MeasureValue>,
    /// r_m of the whole set (joint only).
    pub set_score: Option<MeasureValue>,
    pub approach: Approach,
    pub measure: Measure,
}

/// True when `a` beats `b` by more than the tie tolerance.
pub fn strictly_greater(a: f64, b: f64) -> bool {
    if a == b {
        return false;
    }
    if a.is_infinite() || b.is_infinite() {
        return a > b;
    }
    a - b > TIE_TOLERANCE * a.abs().max(b.abs())
}

/// Position of the best score; earlier positions win ties.
fn tolerant_argmax(scores: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (pos, &s) in scores.iter().enumerate() {
        if s.is_nan() {
            continue;
        }
        match best {
            None => best = Some(pos),
            Some(b) if strictly_greater(s, scores[b]) => best = Some(pos),
            _ => {}
        }
    }
    best
}

fn check_k(model: &SampleModel, k: usize) -> Result<()> {
    if k == 0 || k > model.n() {
        return Err(Error::InvalidArgument(format!(
            "k={k} must lie in [1, {}]",
            model.n()
        )));
    }
    Ok(())
}

fn check_measure(model: &SampleModel, m: Measure) -> Result<()> {
    if m == Measure::R1 && !model.is_discrete() {
        return Err(Error::InfiniteMeasure(1));
    }
    Ok(())
}

fn single_scores(model: &SampleModel, m: Measure, opts: &MeasureOptions) -> Result<Vec<MeasureValue>> {
    let scores = measures::profile(model, m, opts)?;
    if scores.iter().all(|s| s.value.is_infinite()) {
        return Err(Error::InfiniteMeasure(m.index()));
    }
    Ok(scores)
}

/// Indices ranked by descending single-index measure.
pub fn marginal_select(model: &SampleModel, m: Measure, k: usize, opts: &MeasureOptions) -> Result<SelectionResult> {
    check_k(model, k)?;
    check_measure(model, m)?;
    let scores = single_scores(model, m, opts)?;
    let mut remaining: Vec<usize> = (1..=model.n()).collect();
    let mut indices = Vec::with_capacity(k);
    let mut picked = Vec::with_capacity(k);
    for _ in 0..k {
        let values: Vec<f64> = remaining.iter().map(|&i| scores[i - 1].value).collect();
        let pos = tolerant_argmax(&values).expect("remaining candidates");
        let i = remaining.remove(pos);
        indices.push(i);
        picked.push(scores[i - 1]);
    }
    Ok(SelectionResult {
        indices,
        scores: picked,
        set_score: None,
        approach: Approach::Marginal,
        measure: m,
    })
}

/// Exhaustive maximization of r_m(S) over k-subsets, within [`DEFAULT_SUBSET_BUDGET`].
pub fn joint_select(model: &SampleModel, m: Measure, k: usize, opts: &MeasureOptions) -> Result<SelectionResult> {
    joint_select_budgeted(model, m, k, opts, DEFAULT_SUBSET_BUDGET)
}

pub fn joint_select_budgeted(
    model: &SampleModel,
    m: Measure,
    k: usize,
    opts: &MeasureOptions,
    budget: u128,
) -> Result<SelectionResult> {
    check_k(model, k)?;
    check_measure(model, m)?;
    let n = model.n();
    let count = choose_u128(n, k);
    if count > budget {
        return Err(Error::BudgetExceeded { n, k, count, budget });
    }
    let singles = single_scores(model, m, opts)?;
    let subsets: Vec<Vec<usize>> = (1..=n).combinations(k).collect();
    let scores: Vec<MeasureValue> = subsets
        .par_iter()
        .map(|sub| set_measure(model, m, sub, &singles, opts))
        .collect::<Result<_>>()?;
    let values: Vec<f64> = scores.iter().map(|s| s.value).collect();
    let best = tolerant_argmax(&values).expect("at least one subset");
    let indices = subsets[best].clone();
    Ok(SelectionResult {
        scores: indices.iter().map(|&i| singles[i - 1]).collect(),
        indices,
        set_score: Some(scores[best]),
        approach: Approach::Joint,
        measure: m,
    })
}

/// r_m(S) with V empty; r3 of a set is the sum of its single-index values.
fn set_measure(
    model: &SampleModel,
    m: Measure,
    subset: &[usize],
    singles: &[MeasureValue],
    opts: &MeasureOptions,
) -> Result<MeasureValue> {
    if m == Measure::R3 {
        let sum = subset.iter().map(|&i| singles[i - 1].value).collect::<KahanSum>().value();
        return Ok(MeasureValue::exact(sum, singles[0].unit));
    }
    let s = IndexSet::new(subset.to_vec())?;
    measures::measure(model, m, &s, &IndexSet::empty(), opts)
}

/// Greedy selection by conditional measure given the indices chosen so far.
pub fn sequential_select(model: &SampleModel, m: Measure, k: usize, opts: &MeasureOptions) -> Result<SelectionResult> {
    check_k(model, k)?;
    check_measure(model, m)?;
    let n = model.n();
    let mut chosen = IndexSet::empty();
    let mut indices = Vec::with_capacity(k);
    let mut gains = Vec::with_capacity(k);
    for _ in 0..k {
        let candidates: Vec<usize> = (1..=n).filter(|j| !chosen.contains(*j)).collect();
        let scores = conditional_scores(model, m, &candidates, &chosen, opts)?;
        let values: Vec<f64> = scores.iter().map(|s| s.value).collect();
        if values.iter().all(|v| v.is_infinite()) {
            return Err(Error::InfiniteMeasure(m.index()));
        }
        let pos = tolerant_argmax(&values).expect("candidates remain");
        indices.push(candidates[pos]);
        gains.push(scores[pos]);
        chosen = chosen.with(candidates[pos]);
    }
    Ok(SelectionResult {
        indices,
        scores: gains,
        set_score: None,
        approach: Approach::Sequential,
        measure: m,
    })
}

fn conditional_scores(
    model: &SampleModel,
    m: Measure,
    candidates: &[usize],
    chosen: &IndexSet,
    opts: &MeasureOptions,
) -> Result<Vec<MeasureValue>> {
    if m == Measure::R1 {
        // H(j | V) = H(V + j) - H(V); H(V) is shared by every candidate
        let base = measures::set_entropy_nats(model, chosen)?;
        let scale = opts.base.from_nats();
        return candidates
            .par_iter()
            .map(|&j| {
                let joint = measures::set_entropy_nats(model, &chosen.with(j))?;
                Ok(MeasureValue::exact((joint - base).max(0.0) * scale, opts.base.unit()))
            })
            .collect();
    }
    candidates
        .par_iter()
        .map(|&j| measures::measure(model, m, &IndexSet::singleton(j), chosen, opts))
        .collect()
}
