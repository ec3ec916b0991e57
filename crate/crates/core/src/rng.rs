//! Seed derivation and counter-mode Gaussian sampling.
//!
//! All randomness goes through ChaCha8. A value that is logically indexed
//! (a vertex, a trial) reads from its own ChaCha stream `index` under the
//! run seed, so it does not depend on the order in which values are drawn.
//! Normals come from `rand_distr::StandardNormal` (ziggurat) on that stream.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Child seed for item `index` of a run keyed by `master`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index.wrapping_mul(GOLDEN)))
}

/// Generator for stream `stream` under `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// One standard normal per vertex, reproducible per `(seed, vertex)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianField {
    pub values: Vec<f64>,
    pub seed: u64,
}

impl GaussianField {
    pub fn new(n: usize, seed: u64) -> Self {
        let base = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..n)
            .map(|v| {
                let mut rng = base.clone();
                rng.set_stream(v as u64);
                StandardNormal.sample(&mut rng)
            })
            .collect();
        GaussianField { values, seed }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}
