//! Named random streams.
//!
//! Every random decision draws from a ChaCha stream keyed by `(seed, label,
//! index)`, so topology, weights and thresholds can be regenerated
//! independently of one another.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn fnv1a(label: &str) -> u64 {
    label.bytes().fold(FNV_OFFSET, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(FNV_PRIME)
    })
}

// splitmix64 finaliser
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a sub-seed for `(seed, label, index)`.
pub fn derive_seed(seed: u64, label: &str, index: u64) -> u64 {
    mix(mix(seed ^ fnv1a(label)).wrapping_add(index.wrapping_mul(0x9e37_79b9_7f4a_7c15)))
}

/// Opens the stream for `(seed, label, index)`.
pub fn stream(seed: u64, label: &str, index: u64) -> StreamRng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, label, index))
}

/// Uniform draw from the half-open interval `(0, 1]`.
pub fn unit_open_closed<R: rand::Rng + ?Sized>(rng: &mut R) -> f64 {
    1.0 - rng.gen::<f64>()
}

/// Uniform draw from the open interval `(0, 1)`.
pub fn unit_open<R: rand::Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let x = rng.gen::<f64>();
        if x > 0.0 {
            return x;
        }
    }
}
