//! Seeded pseudo-random source used for every sampled quantity.
//!
//! The generator is xorshift64* (Vigna, 2016) with the state initialised by
//! one round of the SplitMix64 finaliser applied to the seed. Integers in
//! `[0, m)` are drawn by rejection from the top of the 64-bit range, so the
//! whole stream is reproducible from the constants below on any platform.

/// Algorithm constants. Changing any of these changes every seeded output.
pub mod constants {
    /// Name recorded in reports.
    pub const ALGORITHM: &str = "xorshift64*";
    /// xorshift triple (right, left, right).
    pub const SHIFT_A: u32 = 12;
    pub const SHIFT_B: u32 = 25;
    pub const SHIFT_C: u32 = 27;
    /// Output multiplier of xorshift64*.
    pub const MULTIPLIER: u64 = 0x2545_F491_4F6C_DD1D;
    /// SplitMix64 increment (golden ratio) and finaliser multipliers.
    pub const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
    pub const MIX_1: u64 = 0xBF58_476D_1CE4_E5B9;
    pub const MIX_2: u64 = 0x94D0_49BB_1331_11EB;
}

use constants::*;

fn splitmix64(seed: u64) -> u64 {
    let mut z = seed.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(MIX_1);
    z = (z ^ (z >> 27)).wrapping_mul(MIX_2);
    z ^ (z >> 31)
}

/// Seed for the `index`-th independent sub-stream of `master`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ index.wrapping_add(1).wrapping_mul(GOLDEN))
}

#[derive(Clone, Debug)]
pub struct XorShift64Star {
    state: u64,
}

impl XorShift64Star {
    pub fn new(seed: u64) -> Self {
        let state = splitmix64(seed);
        // the all-zero state is a fixed point of the xorshift step
        XorShift64Star {
            state: if state == 0 { GOLDEN } else { state },
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> SHIFT_A;
        x ^= x << SHIFT_B;
        x ^= x >> SHIFT_C;
        self.state = x;
        x.wrapping_mul(MULTIPLIER)
    }

    /// Uniform integer in `[0, bound)`.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        // 2^64 mod bound; draws under it are rejected
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let x = self.next_u64();
            if x >= threshold {
                return x % bound;
            }
        }
    }

    /// Uniform integer in `[-bound, bound]`.
    pub fn symmetric(&mut self, bound: u64) -> i64 {
        self.below(2 * bound + 1) as i64 - bound as i64
    }
}
