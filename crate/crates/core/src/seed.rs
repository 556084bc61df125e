//! Deterministic seed derivation.
//!
//! Every random stream in an experiment is identified by a path of labels
//! below the master seed, e.g. `master / "cv" / dataset / learner / method /
//! run`. A child seed is computed as
//!
//! ```text
//! child = splitmix64(parent ^ splitmix64(label_hash))
//! ```
//!
//! where integer labels hash to themselves and text labels hash with 64-bit
//! FNV-1a over their UTF-8 bytes. The mixing depends only on the labels, never
//! on execution order, so serial and parallel runs draw identical numbers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used for every random stream.
pub type Rng = ChaCha8Rng;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// SplitMix64 finaliser.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn fnv1a(bytes: &[u8]) -> u64 {
    bytes
        .iter()
        .fold(FNV_OFFSET, |h, &b| (h ^ u64::from(b)).wrapping_mul(FNV_PRIME))
}

/// A value that can label a branch of the seed tree.
pub trait SeedLabel {
    fn label_hash(&self) -> u64;
}

impl SeedLabel for u64 {
    fn label_hash(&self) -> u64 {
        *self
    }
}

impl SeedLabel for usize {
    fn label_hash(&self) -> u64 {
        *self as u64
    }
}

impl SeedLabel for u32 {
    fn label_hash(&self) -> u64 {
        u64::from(*self)
    }
}

impl SeedLabel for str {
    fn label_hash(&self) -> u64 {
        fnv1a(self.as_bytes())
    }
}

impl SeedLabel for &str {
    fn label_hash(&self) -> u64 {
        fnv1a(self.as_bytes())
    }
}

impl SeedLabel for String {
    fn label_hash(&self) -> u64 {
        fnv1a(self.as_bytes())
    }
}

/// Derives the child seed of `parent` along `label`.
pub fn mix(parent: u64, label: impl SeedLabel) -> u64 {
    splitmix64(parent ^ splitmix64(label.label_hash()))
}

/// Builder over [`mix`] for multi-level paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeedPath(u64);

impl SeedPath {
    pub fn new(master: u64) -> Self {
        SeedPath(master)
    }

    pub fn with(self, label: impl SeedLabel) -> Self {
        SeedPath(mix(self.0, label))
    }

    pub fn seed(self) -> u64 {
        self.0
    }

    pub fn rng(self) -> Rng {
        rng(self.0)
    }
}

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
