//! Reproducible random streams.
//!
//! A [`RngSeed`] names one substream of a ChaCha8 generator. The 256-bit key
//! is the master seed expanded through SplitMix64 and the stream index selects
//! ChaCha's 64-bit stream word, so distinct trials never share a keystream and
//! results do not depend on the order in which trials are executed.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngSeed {
    pub seed: u64,
    pub stream_index: u64,
}

/// Seed used by the command line when none is given.
pub const DEFAULT_SEED: u64 = 0x5eed_0fc0_44e1;

impl RngSeed {
    pub const fn new(seed: u64) -> Self {
        RngSeed {
            seed,
            stream_index: 0,
        }
    }

    pub const fn stream(self, stream_index: u64) -> Self {
        RngSeed {
            seed: self.seed,
            stream_index,
        }
    }

    /// Derives an independent master seed for a sub-experiment, e.g. one
    /// point of a parameter sweep, so its trial streams are disjoint from
    /// every other experiment sharing the same base seed.
    pub fn derive(self, label: u64) -> Self {
        let mut label_state = label;
        let mut state = self.seed ^ splitmix64(&mut label_state);
        RngSeed::new(splitmix64(&mut state))
    }

    pub fn rng(self) -> GraphRng {
        let mut state = self.seed;
        let mut key = [0u8; 32];
        for chunk in key.chunks_exact_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        let mut inner = ChaCha8Rng::from_seed(key);
        inner.set_stream(self.stream_index);
        GraphRng { inner }
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Random source handed to the samplers.
pub struct GraphRng {
    inner: ChaCha8Rng,
}

impl GraphRng {
    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on [0, 1) with 53 bits of precision.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Bernoulli(q). `q >= 1` always succeeds and `q <= 0` never does.
    pub fn bernoulli(&mut self, q: f64) -> bool {
        self.uniform() < q
    }

    /// Uniform integer in `0..bound` by rejection, `bound > 0`.
    pub fn below(&mut self, bound: u64) -> u64 {
        // 2^64 mod bound; draws below it would bias the residue.
        let reject = bound.wrapping_neg() % bound;
        loop {
            let x = self.next_u64();
            if x >= reject {
                return x % bound;
            }
        }
    }
}
