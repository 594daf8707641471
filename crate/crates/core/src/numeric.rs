//! Small numerical building blocks: compensated summation, binomial
//! distributions evaluated by normalized recurrences, entropy helpers.

/// Neumaier compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for KahanSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = KahanSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Compensated sum of an iterator of floats.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<KahanSum>().value()
}

/// Binomial(n, q) probability mass function for all k in 0..=n.
///
/// Terms are generated from the mode outwards with the ratio
/// `pmf(k+1)/pmf(k) = (n-k)/(k+1) * q/(1-q)` and then normalized, so no
/// factorials are formed and nothing underflows near the bulk.
pub fn binomial_pmf(n: usize, q: f64) -> Vec<f64> {
    let mut pmf = vec![0.0; n + 1];
    if q <= 0.0 {
        pmf[0] = 1.0;
        return pmf;
    }
    if q >= 1.0 {
        pmf[n] = 1.0;
        return pmf;
    }
    let mode = (((n + 1) as f64) * q).floor().min(n as f64) as usize;
    let odds = q / (1.0 - q);
    pmf[mode] = 1.0;
    for k in mode..n {
        let next = pmf[k] * ((n - k) as f64) / ((k + 1) as f64) * odds;
        if next == 0.0 {
            break;
        }
        pmf[k + 1] = next;
    }
    for k in (1..=mode).rev() {
        let prev = pmf[k] * (k as f64) / ((n - k + 1) as f64) / odds;
        if prev == 0.0 {
            break;
        }
        pmf[k - 1] = prev;
    }
    let total = compensated_sum(pmf.iter().copied());
    for p in &mut pmf {
        *p /= total;
    }
    pmf
}

/// Binomial distribution with cached lower and upper tail sums.
///
/// Both tails are accumulated directly from the pmf, so `upper_tail(i)` stays
/// accurate when it is tiny instead of being formed as `1 - lower_tail(i)`.
#[derive(Debug, Clone)]
pub struct BinomialRef {
    n: usize,
    q: f64,
    pmf: Vec<f64>,
    // below[k] = P(B < k), k = 0..=n+1
    below: Vec<f64>,
    // at_least[k] = P(B >= k), k = 0..=n+1
    at_least: Vec<f64>,
}

impl BinomialRef {
    pub fn new(n: usize, q: f64) -> Self {
        let q = q.clamp(0.0, 1.0);
        let pmf = binomial_pmf(n, q);
        let mut below = vec![0.0; n + 2];
        let mut acc = KahanSum::new();
        for k in 0..=n {
            acc.add(pmf[k]);
            below[k + 1] = acc.value().min(1.0);
        }
        let mut at_least = vec![0.0; n + 2];
        let mut acc = KahanSum::new();
        for k in (0..=n).rev() {
            acc.add(pmf[k]);
            at_least[k] = acc.value().min(1.0);
        }
        Self {
            n,
            q,
            pmf,
            below,
            at_least,
        }
    }

    pub fn trials(&self) -> usize {
        self.n
    }

    pub fn success_prob(&self) -> f64 {
        self.q
    }

    pub fn pmf(&self, k: usize) -> f64 {
        self.pmf.get(k).copied().unwrap_or(0.0)
    }

    /// P(B < k).
    pub fn lower_tail(&self, k: usize) -> f64 {
        self.below[k.min(self.n + 1)]
    }

    /// P(B >= k).
    pub fn upper_tail(&self, k: usize) -> f64 {
        if k > self.n {
            0.0
        } else {
            self.at_least[k]
        }
    }
}

/// `-t ln t`, with the convention `0 ln 0 = 0`.
pub fn xlogx_neg(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        -t * t.ln()
    }
}

/// Binary entropy in nats.
pub fn binary_entropy(t: f64) -> f64 {
    xlogx_neg(t) + xlogx_neg(1.0 - t)
}

/// Shannon entropy (nats) of a collection of probabilities.
pub fn entropy_nats<I: IntoIterator<Item = f64>>(probs: I) -> f64 {
    compensated_sum(probs.into_iter().map(xlogx_neg)).max(0.0)
}

/// `ln(k!)` for k = 0..=n.
pub fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = KahanSum::new();
    out.push(0.0);
    for k in 1..=n {
        acc.add((k as f64).ln());
        out.push(acc.value());
    }
    out
}

/// Pascal triangle rows 0..=n as f64.
pub fn pascal_triangle(n: usize) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    for r in 0..=n {
        let mut row = vec![1.0; r + 1];
        for c in 1..r {
            row[c] = rows[r - 1][c - 1] + rows[r - 1][c];
        }
        rows.push(row);
    }
    rows
}

/// Exact `C(n, k)` as u128, saturating on overflow.
pub fn choose_u128(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 0..k {
        acc = match acc.checked_mul((n - j) as u128) {
            Some(v) => v / (j as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Two floats equal up to a relative tolerance (absolute near zero).
pub fn approx_eq(a: f64, b: f64, rel: f64) -> bool {
    if a == b {
        return true;
    }
    if !a.is_finite() || !b.is_finite() {
        return false;
    }
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}
