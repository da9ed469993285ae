//! Seeded, chunked Monte-Carlo driver.
//!
//! Samples are split into fixed-size chunks; chunk `i` draws from its own
//! ChaCha stream `i` under the caller's seed. Results therefore do not
//! depend on the number of worker threads, and partial results are merged
//! in chunk order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

const CHUNK: u64 = 1 << 14;

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Estimate {
    pub mean: f64,
    pub std_err: f64,
    pub samples: u64,
}

impl Estimate {
    /// Hit fraction with the binomial standard error.
    pub fn from_hits(hits: u64, samples: u64) -> Self {
        let p = hits as f64 / samples as f64;
        Estimate {
            mean: p,
            std_err: (p * (1.0 - p) / samples as f64).sqrt(),
            samples,
        }
    }

    /// Mean and standard error from a sum and a sum of squares.
    pub fn from_moments(sum: f64, sum_sq: f64, samples: u64) -> Self {
        let n = samples as f64;
        let mean = sum / n;
        let var = if samples > 1 {
            ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0)
        } else {
            0.0
        };
        Estimate {
            mean,
            std_err: (var / n).sqrt(),
            samples,
        }
    }

    /// `|mean - target| <= k * std_err`.
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.std_err
    }
}

/// Runs `work(rng, count)` over every chunk and returns the per-chunk
/// results in chunk order.
pub(crate) fn run_chunks<R, F>(samples: u64, seed: u64, work: F) -> Vec<R>
where
    R: Send,
    F: Fn(&mut ChaCha8Rng, u64) -> R + Sync,
{
    let chunks = samples.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let count = CHUNK.min(samples - i * CHUNK);
            work(&mut rng, count)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn chunks_are_deterministic() {
        let f = |rng: &mut ChaCha8Rng, n: u64| (0..n).map(|_| rng.gen::<u32>() as u64).sum::<u64>();
        let a = run_chunks(100_000, 7, f);
        let b = run_chunks(100_000, 7, f);
        assert_eq!(a, b);
        assert_eq!(a.len(), 7);
        assert_ne!(a, run_chunks(100_000, 8, f));
    }

    #[test]
    fn estimates() {
        let e = Estimate::from_hits(25, 100);
        assert_eq!(e.mean, 0.25);
        assert!((e.std_err - (0.25f64 * 0.75 / 100.0).sqrt()).abs() < 1e-15);
        let m = Estimate::from_moments(6.0, 14.0, 3);
        assert_eq!(m.mean, 2.0);
        assert!((m.std_err - (1.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert!(m.within(2.5, 1.0));
        assert!(!m.within(3.5, 1.0));
    }
}
