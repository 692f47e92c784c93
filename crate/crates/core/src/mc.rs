//! Reproducible Monte Carlo.
//!
//! Every sample draws from its own ChaCha stream selected by
//! `(seed, sample index)`, and reductions run over fixed chunks in index
//! order, so results do not depend on the number of worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Independent random stream for sample `index` of an experiment seeded by `seed`.
pub fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Mixes a label into a seed so that distinct experiments sharing a user
/// seed do not share streams.
pub fn derive_seed(seed: u64, label: u64) -> u64 {
    // splitmix64 finaliser
    let mut z = seed ^ label.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Runs `f` once per sample (in parallel) and returns results in sample order.
pub fn map_samples<T, F>(seed: u64, samples: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng, usize) -> T + Sync,
{
    (0..samples)
        .into_par_iter()
        .map(|i| f(&mut substream(seed, i as u64), i))
        .collect()
}

/// Fallible variant of [`map_samples`]; the first error in sample order wins.
pub fn try_map_samples<T, E, F>(seed: u64, samples: usize, f: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(&mut ChaCha8Rng, usize) -> Result<T, E> + Sync,
{
    map_samples(seed, samples, f).into_iter().collect()
}

/// Chunk size used by [`fold_samples`].
pub const CHUNK: usize = 64;

/// Folds samples into accumulators over fixed chunks of [`CHUNK`] indices
/// and merges the chunk results in order.
pub fn fold_samples<A, I, F, M>(seed: u64, samples: usize, init: I, fold: F, merge: M) -> A
where
    A: Send,
    I: Fn() -> A + Sync,
    F: Fn(&mut A, &mut ChaCha8Rng, usize) + Sync,
    M: Fn(&mut A, A),
{
    let chunks = samples.div_ceil(CHUNK);
    let parts: Vec<A> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = init();
            for i in c * CHUNK..((c + 1) * CHUNK).min(samples) {
                fold(&mut acc, &mut substream(seed, i as u64), i);
            }
            acc
        })
        .collect();
    let mut total = init();
    for p in parts {
        merge(&mut total, p);
    }
    total
}

/// Sample mean with its standard error `s/√n` (unbiased `s`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleStats {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
}

impl SampleStats {
    pub fn from_values(values: &[f64]) -> Self {
        let n = values.len();
        if n == 0 {
            return Self {
                mean: f64::NAN,
                stderr: f64::NAN,
                samples: 0,
            };
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let stderr = if n > 1 {
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        } else {
            0.0
        };
        Self {
            mean,
            stderr,
            samples: n,
        }
    }

    /// A deterministic value, reported with zero error.
    pub fn exact(value: f64) -> Self {
        Self {
            mean: value,
            stderr: 0.0,
            samples: 1,
        }
    }

    /// `|mean − expected| ≤ k·stderr`, with an absolute slack for exact cases.
    pub fn agrees_with(&self, expected: f64, k: f64, slack: f64) -> bool {
        (self.mean - expected).abs() <= k * self.stderr + slack
    }
}

/// Running sums for mean and variance of a vector of observables.
#[derive(Debug, Clone, PartialEq)]
pub struct Moments {
    pub count: usize,
    pub sum: Vec<f64>,
    pub sum_sq: Vec<f64>,
}

impl Moments {
    pub fn new(len: usize) -> Self {
        Self {
            count: 0,
            sum: vec![0.0; len],
            sum_sq: vec![0.0; len],
        }
    }

    pub fn push(&mut self, values: &[f64]) {
        self.count += 1;
        for ((s, q), v) in self.sum.iter_mut().zip(&mut self.sum_sq).zip(values) {
            *s += v;
            *q += v * v;
        }
    }

    pub fn merge(&mut self, other: Moments) {
        self.count += other.count;
        for (s, o) in self.sum.iter_mut().zip(other.sum) {
            *s += o;
        }
        for (s, o) in self.sum_sq.iter_mut().zip(other.sum_sq) {
            *s += o;
        }
    }

    pub fn stats(&self) -> Vec<SampleStats> {
        let n = self.count as f64;
        self.sum
            .iter()
            .zip(&self.sum_sq)
            .map(|(&s, &q)| {
                let mean = s / n;
                let var = if self.count > 1 {
                    ((q - n * mean * mean) / (n - 1.0)).max(0.0)
                } else {
                    0.0
                };
                SampleStats {
                    mean,
                    stderr: (var / n).sqrt(),
                    samples: self.count,
                }
            })
            .collect()
    }
}
