//! Seeded, chunked Monte Carlo with order-independent reduction.
//!
//! Samples are split into fixed-size chunks; chunk `i` draws from stream `i`
//! of a ChaCha generator keyed by the master seed, and chunk accumulators are
//! merged in chunk order.  Results therefore do not depend on the number of
//! worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

pub type StreamRng = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ChunkPlan {
    pub chunk_size: usize,
}

impl Default for ChunkPlan {
    fn default() -> Self {
        Self { chunk_size: 64 }
    }
}

impl ChunkPlan {
    pub fn new(chunk_size: usize) -> Self {
        Self { chunk_size: chunk_size.max(1) }
    }

    pub fn chunks(&self, samples: usize) -> usize {
        samples.div_ceil(self.chunk_size)
    }
}

/// Generator for stream `stream` under `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Derives an independent master seed for a named sub-experiment.
pub fn derive_seed(seed: u64, label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    splitmix(seed ^ splitmix(h))
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Runs `f(rng, count)` for each chunk in parallel and returns the chunk
/// results in chunk order.
pub fn run_chunks<R, F>(samples: usize, seed: u64, plan: ChunkPlan, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(&mut StreamRng, usize) -> R + Sync,
{
    let chunks = plan.chunks(samples);
    (0..chunks)
        .into_par_iter()
        .map(|i| {
            let count = plan.chunk_size.min(samples - i * plan.chunk_size);
            let mut rng = stream_rng(seed, i as u64);
            f(&mut rng, count)
        })
        .collect()
}

/// Streaming mean and variance.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Welford {
    pub n: u64,
    pub mean: f64,
    pub m2: f64,
}

impl Welford {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&mut self, other: &Welford) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *other;
            return;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        self.mean += delta * other.n as f64 / n as f64;
        self.m2 += other.m2 + delta * delta * (self.n as f64 * other.n as f64) / n as f64;
        self.n = n;
    }

    /// Sample variance (divisor `n − 1`).
    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n - 1) as f64
        }
    }

    pub fn stderr(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            (self.variance() / self.n as f64).sqrt()
        }
    }
}

/// A Monte Carlo estimate with its provenance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MCEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub count: u64,
    pub seed: u64,
    pub chunk_size: usize,
}

impl MCEstimate {
    pub fn from_welford(w: &Welford, seed: u64, plan: ChunkPlan) -> Self {
        Self { mean: w.mean, stderr: w.stderr(), count: w.n, seed, chunk_size: plan.chunk_size }
    }

    /// Merges chunk accumulators in order.
    pub fn from_parts(parts: Vec<Welford>, seed: u64, plan: ChunkPlan) -> Self {
        Self::from_welford(&merge_all(&parts), seed, plan)
    }

    /// Estimate of `E[X]^{1/q}` from an estimate of `E[X]` (delta method).
    pub fn root(&self, q: f64) -> Self {
        let mean = self.mean.max(0.0).powf(1.0 / q);
        let stderr = if self.mean > 0.0 { mean / (q * self.mean) * self.stderr } else { 0.0 };
        Self { mean, stderr, ..*self }
    }

    /// `|mean − target| ≤ k·stderr` (with a round-off allowance).
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.stderr + 1e-12 * target.abs().max(1.0)
    }
}

pub fn merge_all(parts: &[Welford]) -> Welford {
    let mut acc = Welford::default();
    for p in parts {
        acc.merge(p);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn welford_matches_two_pass() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 * 0.5 - 3.0).collect();
        let mut a = Welford::default();
        xs.iter().for_each(|&x| a.push(x));
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
        assert!((a.mean - mean).abs() < 1e-12 && (a.variance() - var).abs() < 1e-9);
        let mut b = Welford::default();
        let mut c = Welford::default();
        xs[..300].iter().for_each(|&x| b.push(x));
        xs[300..].iter().for_each(|&x| c.push(x));
        b.merge(&c);
        assert!((b.mean - mean).abs() < 1e-12 && (b.variance() - var).abs() < 1e-9);
    }

    #[test]
    fn chunking_is_thread_independent() {
        let job = || {
            let parts = run_chunks(1000, 9, ChunkPlan::new(37), |rng, n| {
                let mut w = Welford::default();
                for _ in 0..n {
                    w.push(rng.random::<f64>());
                }
                w
            });
            MCEstimate::from_parts(parts, 9, ChunkPlan::new(37))
        };
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(job);
        let many = rayon::ThreadPoolBuilder::new().num_threads(5).build().unwrap().install(job);
        assert_eq!(one, many);
        assert_eq!(one.count, 1000);
    }

    #[test]
    fn derived_seeds_differ() {
        assert_ne!(derive_seed(1, "a"), derive_seed(1, "b"));
        assert_eq!(derive_seed(7, "x"), derive_seed(7, "x"));
    }
}
