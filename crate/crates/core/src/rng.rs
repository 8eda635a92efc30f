//! Deterministic sampling primitives.
//!
//! All randomized operations in this crate (down-sampling, fold shuffling,
//! synthetic data) draw from [`SplitMix64`] so that the same inputs and seed
//! produce the same membership in any implementation language. SplitMix64 is
//! a 64-bit-state generator with published constants, trivially portable.

/// SplitMix64 generator (Steele, Lea & Flood; the Java 8 `SplittableRandom`
/// finalizer).
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform draw in `0..n`, unbiased via rejection of the partial zone.
    pub fn bounded(&mut self, n: u64) -> u64 {
        assert!(n > 0, "bounded(0) is undefined");
        // 2^64 mod n: values below this would over-represent small residues.
        let zone = ((u64::MAX % n) + 1) % n;
        loop {
            let v = self.next_u64();
            if v >= zone {
                return v % n;
            }
        }
    }

    pub fn next_f64(&mut self) -> f64 {
        // 53 random bits into [0, 1).
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// In-place Fisher–Yates shuffle.
    pub fn shuffle<T>(&mut self, xs: &mut [T]) {
        for i in (1..xs.len()).rev() {
            let j = self.bounded(i as u64 + 1) as usize;
            xs.swap(i, j);
        }
    }

    /// Chooses `k` of `0..n` without replacement; returns the chosen indices
    /// sorted ascending so downstream consumers keep the input's order.
    pub fn sample_indices(&mut self, n: usize, k: usize) -> Vec<usize> {
        assert!(k <= n, "cannot sample {k} of {n} without replacement");
        let mut indices: Vec<usize> = (0..n).collect();
        self.shuffle(&mut indices);
        indices.truncate(k);
        indices.sort_unstable();
        indices
    }
}

/// Derives an independent stream seed for a named purpose.
///
/// The tag is folded in with FNV-1a and pushed through one SplitMix64 step,
/// so `derive_seed(s, "a")` and `derive_seed(s, "b")` are decorrelated while
/// staying reproducible across languages.
pub fn derive_seed(seed: u64, tag: &str) -> u64 {
    const FNV_OFFSET: u64 = 0xCBF2_9CE4_8422_2325;
    const FNV_PRIME: u64 = 0x0000_0100_0000_01B3;
    let mut h = FNV_OFFSET;
    for b in tag.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(FNV_PRIME);
    }
    SplitMix64::new(seed ^ h).next_u64()
}
