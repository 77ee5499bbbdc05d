//! Counter-based random streams.
//!
//! A [`Stream`] is keyed by a 64-bit seed and a text label; the `i`-th word
//! of a stream is a pure function of `(key, i)`. Samplers address draws by
//! index (edge index, payoff slot, BRD step), so the same instance comes out
//! regardless of evaluation order, laziness, or thread count.

/// SplitMix64 output finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

fn fnv1a(label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Stream {
    k0: u64,
    k1: u64,
}

impl Stream {
    pub fn new(seed: u64, label: &str) -> Self {
        let k0 = mix64(seed ^ mix64(fnv1a(label)));
        let k1 = mix64(k0.wrapping_add(GOLDEN) ^ seed.rotate_left(32));
        Stream { k0, k1 }
    }

    /// Child stream indexed by `index`; children of distinct indices are unrelated.
    pub fn substream(&self, index: u64) -> Stream {
        let k0 = self.word(index);
        let k1 = mix64(k0 ^ self.k1.rotate_left(17));
        Stream { k0, k1 }
    }

    /// Child stream indexed by a label.
    pub fn labeled(&self, label: &str) -> Stream {
        Stream::new(self.word(fnv1a(label)), label)
    }

    #[inline]
    pub fn word(&self, index: u64) -> u64 {
        mix64(mix64(index.wrapping_mul(GOLDEN).wrapping_add(self.k0)) ^ self.k1)
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    #[inline]
    pub fn unit(&self, index: u64) -> f64 {
        (self.word(index) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `0..bound` by the multiply-high method; `bound > 0`.
    #[inline]
    pub fn below(&self, index: u64, bound: u32) -> u32 {
        debug_assert!(bound > 0);
        ((self.word(index) as u128 * bound as u128) >> 64) as u32
    }

    /// Bernoulli(`p`) draw.
    #[inline]
    pub fn bernoulli(&self, index: u64, p: f64) -> bool {
        self.unit(index) < p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words_are_pure_functions_of_key_and_index() {
        let a = Stream::new(7, "marks");
        let b = Stream::new(7, "marks");
        assert_eq!(a, b);
        for i in [0u64, 1, 2, 1 << 40, u64::MAX] {
            assert_eq!(a.word(i), b.word(i));
        }
        assert_ne!(a.word(0), Stream::new(8, "marks").word(0));
        assert_ne!(a.word(0), Stream::new(7, "bond").word(0));
        assert_ne!(a.substream(0), a.substream(1));
    }

    #[test]
    fn unit_and_below_ranges() {
        let s = Stream::new(0, "t");
        for i in 0..10_000 {
            let u = s.unit(i);
            assert!((0.0..1.0).contains(&u));
            assert!(s.below(i, 7) < 7);
        }
        assert_eq!(s.below(3, 1), 0);
    }

    #[test]
    fn unit_mean_and_bit_balance() {
        let s = Stream::new(12345, "balance");
        let n = 200_000u64;
        let mean: f64 = (0..n).map(|i| s.unit(i)).sum::<f64>() / n as f64;
        // sd of the mean is sqrt(1/12/n) ~ 6.5e-4
        assert!((mean - 0.5).abs() < 4.0 * (1.0 / 12.0 / n as f64).sqrt());
        let ones: u64 = (0..n).map(|i| s.word(i).count_ones() as u64).sum();
        let expected = 32.0 * n as f64;
        assert!((ones as f64 - expected).abs() < 4.0 * (16.0 * n as f64).sqrt());
    }

    #[test]
    fn below_is_roughly_uniform() {
        let s = Stream::new(99, "below");
        let mut counts = [0u32; 5];
        let n = 100_000;
        for i in 0..n {
            counts[s.below(i, 5) as usize] += 1;
        }
        let p = 0.2;
        let se = (n as f64 * p * (1.0 - p)).sqrt();
        for c in counts {
            assert!((c as f64 - n as f64 * p).abs() < 4.0 * se, "{counts:?}");
        }
    }
}
