//! Seeded, chunked Monte Carlo runner.
//!
//! Trials are split into fixed-size chunks. Chunk `c` draws from a ChaCha8
//! stream selected by `c`, and chunk results are combined in chunk order, so
//! estimates do not depend on the number of worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::numeric::KahanSum;

/// Trials per chunk.
pub const CHUNK: usize = 1 << 14;

/// Point estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
}

impl Estimate {
    /// True if `exact` lies within `k` standard errors of the estimate.
    pub fn covers(&self, exact: f64, k: f64) -> bool {
        let slack = 1e-12 * exact.abs().max(self.value.abs());
        (self.value - exact).abs() <= k * self.std_error + slack
    }
}

/// Runs `body(rng, len)` over consecutive chunks and returns results in order.
pub fn run_chunks<A, F>(trials: usize, seed: u64, body: F) -> Vec<A>
where
    A: Send,
    F: Fn(&mut ChaCha8Rng, usize) -> A + Sync,
{
    let chunks = trials.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let len = CHUNK.min(trials - c * CHUNK);
            body(&mut rng, len)
        })
        .collect()
}

/// Running mean and second moment of per-trial contributions.
#[derive(Debug, Clone, Copy, Default)]
pub struct MeanAccumulator {
    count: usize,
    sum: KahanSum,
    sum_sq: KahanSum,
}

impl MeanAccumulator {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        self.sum.add(x);
        self.sum_sq.add(x * x);
    }

    pub fn merge(&mut self, other: &MeanAccumulator) {
        self.count += other.count;
        self.sum.add(other.sum.value());
        self.sum_sq.add(other.sum_sq.value());
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// Sample mean with standard error `sd / sqrt(count)`.
    pub fn estimate(&self) -> Estimate {
        let n = self.count as f64;
        let mean = self.sum.value() / n;
        let var = if self.count > 1 {
            ((self.sum_sq.value() - n * mean * mean) / (n - 1.0)).max(0.0)
        } else {
            0.0
        };
        Estimate {
            value: mean,
            std_error: (var / n).sqrt(),
        }
    }
}

/// Merges per-chunk accumulators in chunk order.
pub fn merge_means(parts: &[MeanAccumulator]) -> MeanAccumulator {
    let mut total = MeanAccumulator::default();
    for p in parts {
        total.merge(p);
    }
    total
}

/// Draws `n` values with `draw`, sorted ascending, into `buf`.
pub fn sorted_sample<F: FnMut() -> f64>(buf: &mut Vec<f64>, n: usize, mut draw: F) {
    buf.clear();
    buf.extend((0..n).map(|_| draw()));
    buf.sort_unstable_by(f64::total_cmp);
}
