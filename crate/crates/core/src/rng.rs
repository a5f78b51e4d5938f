//! Seeded pseudo-random numbers for sign patterns and Gaussian coefficients.
//!
//! SplitMix64 (Steele, Lea, Flood 2014): a 64-bit counter passed through a
//! fixed avalanche. Streams are a pure function of the seed, so every sweep
//! in this crate is replayable from its seed alone and independent of crate
//! versions or platform.

/// SplitMix64 generator.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Derived generator for substream `index`, prefix-stable in `index`.
    pub fn fork(seed: u64, index: u64) -> Self {
        // Weyl-step the seed so substreams start far apart.
        Self::new(seed ^ index.wrapping_mul(0xa076_1d64_78bd_642f).wrapping_add(0xe703_7ed1_a0b4_28db))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1) with 53 bits of mantissa.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on {-1.0, +1.0}.
    pub fn next_sign(&mut self) -> f64 {
        if self.next_u64() & 1 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Standard normal via the Box-Muller transform (cosine branch).
    /// Consumes exactly two uniforms per sample unless the first is zero.
    pub fn next_gaussian(&mut self) -> f64 {
        let mut u1 = self.next_f64();
        while u1 == 0.0 {
            u1 = self.next_f64();
        }
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }
}
