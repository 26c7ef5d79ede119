//! Deterministic counter-based pseudo-random generator for seeded sweeps.
//!
//! Randomized checks (equivalence sweeps, sampled lower bounds, instance
//! generation) must be reproducible byte-for-byte across runs and worker
//! counts, so the generator is a fixed, documented mixing function rather
//! than a library RNG whose stream could change across versions: the
//! splitmix64 finalizer applied to an incrementing counter.

/// Counter-based splitmix64 stream.
///
/// Every draw advances the counter by the golden-ratio increment and applies
/// the splitmix64 finalizer, so the n-th draw of a stream depends only on
/// `(seed, stream, n)`.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn finalize(mut z: u64) -> u64 {
    z ^= z >> 30;
    z = z.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Derives an independent stream, so parallel sweeps can give each unit
    /// of work its own generator keyed by `(seed, stream index)`.
    pub fn fork(&self, stream: u64) -> Self {
        let mut probe = Self {
            state: self.state ^ finalize(stream.wrapping_mul(GOLDEN).wrapping_add(GOLDEN)),
        };
        probe.next_u64();
        probe
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        finalize(self.state)
    }

    /// Uniform draw in `[0, bound)` by rejection from the top multiple of
    /// `bound`, so no modular bias enters sampled counts.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "next_below requires a positive bound");
        let zone = u64::MAX - (u64::MAX % bound);
        loop {
            let draw = self.next_u64();
            if draw < zone {
                return draw % bound;
            }
        }
    }

    /// Uniform draw in `[0, 1)` with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform draw in `[lo, hi)`.
    pub fn next_f64_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform signed integer in `[-bound, bound]`.
    pub fn next_signed(&mut self, bound: u64) -> i64 {
        self.next_below(2 * bound + 1) as i64 - bound as i64
    }

    pub fn next_bool(&mut self) -> bool {
        self.next_u64() & 1 == 1
    }

    /// Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.next_below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}
