//! Seeded randomness and the low-discrepancy sequence used for stratified
//! pair sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Environment variable that overrides the configured seed in the CLI.
pub const SEED_ENV: &str = "COARSE_GEOM_SEED";

pub const DEFAULT_SEED: u64 = 20_240_601;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent stream seed for a named sub-task.
pub fn substream(seed: u64, label: &str) -> u64 {
    // FNV-1a over the label, mixed with the seed by splitmix64.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    splitmix64(seed ^ h)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Additive-recurrence sequence in the unit square (generalized golden
/// ratio), shifted by a seeded random offset.
#[derive(Clone, Debug)]
pub struct LowDiscrepancy2 {
    offset: [f64; 2],
    index: u64,
}

const PLASTIC: f64 = 1.324_717_957_244_746;

impl LowDiscrepancy2 {
    pub fn new(seed: u64) -> Self {
        let mut r = rng(seed);
        LowDiscrepancy2 {
            offset: [r.gen::<f64>(), r.gen::<f64>()],
            index: 0,
        }
    }
}

impl Iterator for LowDiscrepancy2 {
    type Item = [f64; 2];

    fn next(&mut self) -> Option<[f64; 2]> {
        self.index += 1;
        let n = self.index as f64;
        let a1 = 1.0 / PLASTIC;
        let a2 = 1.0 / (PLASTIC * PLASTIC);
        Some([
            (self.offset[0] + n * a1).fract(),
            (self.offset[1] + n * a2).fract(),
        ])
    }
}
