//! Seed derivation.
//!
//! Every random object in the crate is a pure function of a [`Seed`]. Child
//! seeds are derived by mixing a parent seed with a label through SplitMix64,
//! so sub-streams for replicates, family members and tree classes never depend
//! on scheduling order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Generator used for every sampled object.
pub type LabRng = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Seed(pub u64);

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl Seed {
    pub fn derive(self, label: u64) -> Seed {
        Seed(splitmix64(splitmix64(self.0) ^ splitmix64(label.wrapping_add(0x632B_E59B_D9B4_E019))))
    }

    /// Child seed keyed by a string, e.g. a canonical tree code.
    pub fn derive_str(self, label: &str) -> Seed {
        let digest = Sha256::digest(label.as_bytes());
        let mut word = [0u8; 8];
        word.copy_from_slice(&digest[..8]);
        self.derive(u64::from_le_bytes(word))
    }

    pub fn rng(self) -> LabRng {
        LabRng::seed_from_u64(self.0)
    }
}

impl From<u64> for Seed {
    fn from(v: u64) -> Self {
        Seed(v)
    }
}

impl std::fmt::Display for Seed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Stream labels shared across modules.
pub(crate) mod stream {
    pub const EDGES: u64 = 1;
    pub const PI_STAR: u64 = 2;
}
