//! Per-sample random streams.
//!
//! Every Monte Carlo sample draws from its own ChaCha8 stream, keyed by the
//! run seed and the sample index. Sample `i` therefore sees the same numbers
//! no matter how the index range is split across workers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Factory for per-sample streams of one seeded run.
#[derive(Debug, Clone)]
pub struct StreamFamily {
    base: ChaCha8Rng,
}

impl StreamFamily {
    pub fn new(seed: u64) -> Self {
        StreamFamily {
            base: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn stream(&self, index: u64) -> SampleStream {
        let mut rng = self.base.clone();
        rng.set_stream(index);
        SampleStream { rng }
    }
}

#[derive(Debug, Clone)]
pub struct SampleStream {
    rng: ChaCha8Rng,
}

impl SampleStream {
    /// Uniform on the open interval `(0, 1)`.
    pub fn uniform_open(&mut self) -> f64 {
        loop {
            let u: f64 = self.rng.random();
            if u > 0.0 {
                return u;
            }
        }
    }

    /// Two distinct uniforms, returned as `(larger, smaller)`.
    pub fn ordered_pair(&mut self) -> (f64, f64) {
        loop {
            let u = self.uniform_open();
            let v = self.uniform_open();
            if u != v {
                return if u > v { (u, v) } else { (v, u) };
            }
        }
    }
}
