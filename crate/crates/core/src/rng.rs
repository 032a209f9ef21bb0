//! Counter-based potential generation.
//!
//! A vertex potential is a pure function of `(seed, stream_id, x, y)`: the
//! ChaCha8 keystream keyed by `seed` on stream `stream_id` is addressed by the
//! absolute lattice coordinates, two 32-bit words per vertex. Any box, any
//! sub-box and any single vertex therefore see the same values, and a row of
//! vertices is a contiguous slice of the keystream.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::lattice::Vertex;

/// Key of a reproducible potential stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct RngSeed {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngSeed {
    pub const fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    /// Independent child stream, used for per-trial and per-grid-point fields.
    pub fn substream(self, index: u64) -> Self {
        Self {
            seed: self.seed,
            stream_id: splitmix64(self.stream_id ^ splitmix64(index.wrapping_add(0x632b_e59b_d9b4_e019))),
        }
    }
}

/// SplitMix64 output function.
pub(crate) fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// 53-bit uniform on `[0, 1)`; every output is an exact multiple of 2⁻⁵³.
#[inline]
pub fn unit_f64(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

#[inline]
fn word_position(v: Vertex) -> u128 {
    let x = (i64::from(v.x) + (1i64 << 31)) as u128;
    let y = (i64::from(v.y) + (1i64 << 31)) as u128;
    (y << 33) | (x << 1)
}

/// Random-access reader of the potential stream of one [`RngSeed`].
#[derive(Debug, Clone)]
pub struct PotentialSampler {
    rng: ChaCha8Rng,
}

impl PotentialSampler {
    pub fn new(seed: RngSeed) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.seed.to_le_bytes());
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(seed.stream_id);
        Self { rng }
    }

    /// Potential of a single vertex.
    pub fn at(&mut self, v: Vertex) -> f64 {
        self.rng.set_word_pos(word_position(v));
        unit_f64(self.rng.next_u64())
    }

    /// Potentials of the vertices `(start.x + k, start.y)` for `k = 0..out.len()`.
    pub fn fill_row(&mut self, start: Vertex, out: &mut [f64]) {
        self.rng.set_word_pos(word_position(start));
        for slot in out {
            *slot = unit_f64(self.rng.next_u64());
        }
    }
}
