//! Streaming sample statistics with an associative merge, plus the
//! deterministic parallel reduction every estimator is built on.

use rayon::prelude::*;

use crate::rng::{PathRng, SeedSpec};

/// Power-sum accumulator for (mean, stderr, kurtosis). Merging two
/// accumulators is componentwise addition, so partial aggregates combine
/// associatively and the reduction order is fixed by the caller.
#[derive(Clone, Copy, Debug, Default)]
pub struct Aggregate {
    pub n: u64,
    sum: f64,
    sum2: f64,
    sum3: f64,
    sum4: f64,
}

impl Aggregate {
    pub fn new() -> Self {
        Aggregate::default()
    }

    pub fn push(&mut self, x: f64) {
        self.n += 1;
        self.sum += x;
        let x2 = x * x;
        self.sum2 += x2;
        self.sum3 += x2 * x;
        self.sum4 += x2 * x2;
    }

    pub fn merge(&mut self, other: &Aggregate) {
        self.n += other.n;
        self.sum += other.sum;
        self.sum2 += other.sum2;
        self.sum3 += other.sum3;
        self.sum4 += other.sum4;
    }

    pub fn from_slice(xs: &[f64]) -> Self {
        let mut a = Aggregate::new();
        for &x in xs {
            a.push(x);
        }
        a
    }

    pub fn mean(&self) -> f64 {
        if self.n == 0 {
            f64::NAN
        } else {
            self.sum / self.n as f64
        }
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            return f64::NAN;
        }
        let n = self.n as f64;
        let m = self.mean();
        ((self.sum2 - n * m * m) / (n - 1.0)).max(0.0)
    }

    /// Standard error of the mean; `None` below two samples.
    pub fn stderr(&self) -> Option<f64> {
        if self.n < 2 {
            None
        } else {
            Some((self.variance() / self.n as f64).sqrt())
        }
    }

    /// Excess kurtosis from raw power sums (population form).
    pub fn kurtosis(&self) -> f64 {
        if self.n < 2 {
            return f64::NAN;
        }
        let n = self.n as f64;
        let m = self.mean();
        let m2 = self.sum2 / n - m * m;
        if m2 <= 0.0 {
            return 0.0;
        }
        let m4 = self.sum4 / n - 4.0 * m * self.sum3 / n + 6.0 * m * m * self.sum2 / n
            - 3.0 * m * m * m * m;
        m4 / (m2 * m2) - 3.0
    }
}

/// Work is split into fixed-size batches of logical sample indices; batch
/// results are collected in index order and folded sequentially, so the
/// outcome is identical for every worker count, including 1.
pub const BATCH_SIZE: u64 = 4096;

/// Runs `f(sample_index, base_seed)` for indices `0..n` in parallel and
/// merges the per-sample aggregates deterministically. `f` must derive all
/// randomness from the sample index (streams `base.offset(...)`).
pub fn parallel_aggregate<F>(n: u64, f: F) -> Aggregate
where
    F: Fn(u64) -> f64 + Sync,
{
    let n_batches = n.div_ceil(BATCH_SIZE);
    let partials: Vec<Aggregate> = (0..n_batches)
        .into_par_iter()
        .map(|b| {
            let lo = b * BATCH_SIZE;
            let hi = ((b + 1) * BATCH_SIZE).min(n);
            let mut agg = Aggregate::new();
            for i in lo..hi {
                agg.push(f(i));
            }
            agg
        })
        .collect();
    let mut total = Aggregate::new();
    for p in &partials {
        total.merge(p);
    }
    total
}

/// As `parallel_aggregate`, but collecting an arbitrary mergeable per-batch
/// value. Outputs are folded in batch order.
pub fn parallel_fold<T, F, M>(n: u64, init: T, f: F, merge: M) -> T
where
    T: Clone + Send + Sync,
    F: Fn(u64, &mut T) + Sync,
    M: Fn(&mut T, T),
{
    let n_batches = n.div_ceil(BATCH_SIZE);
    let partials: Vec<T> = (0..n_batches)
        .into_par_iter()
        .map(|b| {
            let lo = b * BATCH_SIZE;
            let hi = ((b + 1) * BATCH_SIZE).min(n);
            let mut acc = init.clone();
            for i in lo..hi {
                f(i, &mut acc);
            }
            acc
        })
        .collect();
    let mut total = init;
    for p in partials {
        merge(&mut total, p);
    }
    total
}

/// Per-sample generator handed its own stream.
pub fn per_sample_rng(base: SeedSpec, index: u64) -> PathRng {
    PathRng::new(base.offset(index))
}

/// Ordinary least squares fit y = a + b·x; returns (intercept, slope).
pub fn fit_line(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys.iter()) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let slope = sxy / sxx;
    (my - slope * mx, slope)
}
