// Copyright 2026 The decogate Authors
// SPDX-License-Identifier: Apache-2.0

//! Monte Carlo realization of the pulse-area distribution.
//!
//! Parallel runs split the sample count into a fixed number of shards. Shard
//! `k` draws from the ChaCha stream `k` of the root seed and the shard
//! moments are merged in shard order, so results do not depend on the
//! thread count or on completion order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;

use super::AreaDistribution;
use crate::error::{Error, Result};

/// Shards used by the parallel estimators.
pub const SHARDS: usize = 64;

/// Independent random stream `index` derived from `root_seed`.
pub fn stream(root_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(root_seed);
    rng.set_stream(index);
    rng
}

/// Sampler for [`AreaDistribution`].
#[derive(Debug, Clone, Copy)]
pub struct AreaSampler {
    gamma: Gamma<f64>,
}

impl AreaSampler {
    pub fn new(d: &AreaDistribution) -> Result<Self> {
        if d.tau == 0.0 {
            return Err(Error::DegenerateDistribution);
        }
        let gamma = Gamma::new(d.shape(), d.scale())
            .map_err(|e| crate::error::invalid("area distribution", e.to_string()))?;
        Ok(Self { gamma })
    }
}

impl Distribution<f64> for AreaSampler {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.gamma.sample(rng)
    }
}

/// Draws one pulse area `A >= 0`.
pub fn sample_area<R: Rng + ?Sized>(d: &AreaDistribution, rng: &mut R) -> Result<f64> {
    Ok(AreaSampler::new(d)?.sample(rng))
}

/// Mean and standard error of a Monte Carlo estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
}

impl McEstimate {
    /// `|value - mean|` in units of the standard error. Exact agreement with
    /// zero spread counts as zero sigmas.
    pub fn sigmas_from(&self, value: f64) -> f64 {
        let diff = (value - self.mean).abs();
        if self.stderr > 0.0 {
            diff / self.stderr
        } else if diff <= 1e-12 * value.abs().max(1.0) {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

/// Running mean and centred second moment of a fixed-length vector of
/// observables (Welford updates, Chan merges).
#[derive(Debug, Clone)]
pub struct Moments {
    count: u64,
    mean: Vec<f64>,
    m2: Vec<f64>,
}

impl Moments {
    pub fn new(width: usize) -> Self {
        Self {
            count: 0,
            mean: vec![0.0; width],
            m2: vec![0.0; width],
        }
    }

    pub fn width(&self) -> usize {
        self.mean.len()
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn push(&mut self, x: &[f64]) {
        debug_assert_eq!(x.len(), self.width());
        self.count += 1;
        let n = self.count as f64;
        for ((m, m2), &v) in self.mean.iter_mut().zip(self.m2.iter_mut()).zip(x) {
            let delta = v - *m;
            *m += delta / n;
            *m2 += delta * (v - *m);
        }
    }

    pub fn merge(&mut self, other: &Moments) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = other.clone();
            return;
        }
        let (na, nb) = (self.count as f64, other.count as f64);
        let n = na + nb;
        for i in 0..self.width() {
            let delta = other.mean[i] - self.mean[i];
            self.mean[i] += delta * nb / n;
            self.m2[i] += other.m2[i] + delta * delta * na * nb / n;
        }
        self.count += other.count;
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    /// Standard error of the mean of component `i` (sample variance with
    /// `n - 1`).
    pub fn stderr(&self, i: usize) -> f64 {
        if self.count < 2 {
            return f64::INFINITY;
        }
        let n = self.count as f64;
        (self.m2[i] / (n - 1.0) / n).max(0.0).sqrt()
    }

    pub fn estimate(&self, i: usize) -> McEstimate {
        McEstimate {
            mean: self.mean[i],
            stderr: self.stderr(i),
        }
    }
}

/// Runs `n` samples of a vector observable of length `width` across
/// [`SHARDS`] deterministic streams and returns the merged moments together
/// with the per-shard moments (in shard order) for batch-means estimates.
///
/// `observe` draws whatever randomness it needs from the provided stream and
/// writes one realization into the output slice.
pub fn parallel_moments<F>(
    n: usize,
    root_seed: u64,
    width: usize,
    observe: F,
) -> (Moments, Vec<Moments>)
where
    F: Fn(&mut ChaCha8Rng, &mut [f64]) + Sync,
{
    let shards: Vec<Moments> = (0..SHARDS)
        .into_par_iter()
        .map(|k| {
            let quota = n / SHARDS + usize::from(k < n % SHARDS);
            let mut rng = stream(root_seed, k as u64);
            let mut acc = Moments::new(width);
            let mut buf = vec![0.0; width];
            for _ in 0..quota {
                observe(&mut rng, &mut buf);
                acc.push(&buf);
            }
            acc
        })
        .collect();
    let mut total = Moments::new(width);
    for s in &shards {
        total.merge(s);
    }
    (total, shards)
}

/// Sample mean and standard error of `f(A)` for `n` areas drawn from `d`.
pub fn mc_average<R: Rng + ?Sized>(
    f: impl Fn(f64) -> f64,
    d: &AreaDistribution,
    n: usize,
    rng: &mut R,
) -> Result<McEstimate> {
    if n < 2 {
        return Err(crate::error::invalid("n", "need at least 2 samples"));
    }
    let sampler = AreaSampler::new(d)?;
    let mut acc = Moments::new(1);
    for _ in 0..n {
        acc.push(&[f(sampler.sample(rng))]);
    }
    Ok(acc.estimate(0))
}

/// Parallel [`mc_average`] over [`SHARDS`] streams of `root_seed`.
pub fn mc_average_parallel(
    f: impl Fn(f64) -> f64 + Sync,
    d: &AreaDistribution,
    n: usize,
    root_seed: u64,
) -> Result<McEstimate> {
    if n < 2 {
        return Err(crate::error::invalid("n", "need at least 2 samples"));
    }
    let sampler = AreaSampler::new(d)?;
    let (m, _) = parallel_moments(n, root_seed, 1, |rng, out| out[0] = f(sampler.sample(rng)));
    Ok(m.estimate(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments_merge_matches_sequential() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 * 0.1).collect();
        let mut all = Moments::new(1);
        for &x in &xs {
            all.push(&[x]);
        }
        let mut a = Moments::new(1);
        let mut b = Moments::new(1);
        for &x in &xs[..313] {
            a.push(&[x]);
        }
        for &x in &xs[313..] {
            b.push(&[x]);
        }
        a.merge(&b);
        assert!((a.mean()[0] - all.mean()[0]).abs() < 1e-12);
        assert!((a.stderr(0) - all.stderr(0)).abs() < 1e-12);
    }

    #[test]
    fn parallel_is_deterministic() {
        let d = AreaDistribution::new(1.0, 0.1, 2.0).unwrap();
        let a = mc_average_parallel(|x| x, &d, 10_000, 42).unwrap();
        let b = mc_average_parallel(|x| x, &d, 10_000, 42).unwrap();
        assert_eq!(a, b);
        let c = mc_average_parallel(|x| x, &d, 10_000, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn constant_function_has_zero_stderr() {
        let d = AreaDistribution::new(std::f64::consts::PI / 1e5, 1e-8, 1e5).unwrap();
        let mut rng = stream(0, 0);
        let est = mc_average(|_| 1.0, &d, 1000, &mut rng).unwrap();
        assert_eq!(est.mean, 1.0);
        assert_eq!(est.stderr, 0.0);
    }

    #[test]
    fn degenerate_distribution_is_rejected() {
        let d = AreaDistribution::new(1.0, 0.0, 1.0).unwrap();
        assert_eq!(
            AreaSampler::new(&d).unwrap_err(),
            Error::DegenerateDistribution
        );
    }
}
