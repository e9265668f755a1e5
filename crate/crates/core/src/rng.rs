//! Seeded randomness: ChaCha streams and uniform fixed-size subsets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits;

/// RNG for stream `stream` of base seed `seed`. Distinct streams are
/// independent, so work split by stream index is reproducible regardless of
/// how it is scheduled.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Mixes a base seed with a label (splitmix64 finalizer).
pub fn derive_seed(seed: u64, label: u64) -> u64 {
    let mut z = seed ^ label.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Reusable partial Fisher–Yates sampler over `0..n`.
pub struct SubsetSampler {
    pool: Vec<usize>,
}

impl SubsetSampler {
    pub fn new(n: usize) -> SubsetSampler {
        SubsetSampler {
            pool: (0..n).collect(),
        }
    }

    /// A uniform `size`-subset; the returned slice is unsorted.
    pub fn sample<R: Rng + ?Sized>(&mut self, rng: &mut R, size: usize) -> &[usize] {
        let n = self.pool.len();
        assert!(size <= n, "sample size {size} exceeds population {n}");
        for i in 0..size {
            let j = rng.random_range(i..n);
            self.pool.swap(i, j);
        }
        &self.pool[..size]
    }

    pub fn sample_sorted<R: Rng + ?Sized>(&mut self, rng: &mut R, size: usize) -> Vec<usize> {
        let mut out = self.sample(rng, size).to_vec();
        out.sort_unstable();
        out
    }

    /// Samples into a packed bit vector of `words` words.
    pub fn sample_bits<R: Rng + ?Sized>(&mut self, rng: &mut R, size: usize, out: &mut [u64]) {
        out.iter_mut().for_each(|w| *w = 0);
        let chosen = self.sample(rng, size);
        bits::set_labels(out, chosen);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_are_distinct_and_in_range() {
        let mut rng = stream_rng(7, 0);
        let mut s = SubsetSampler::new(10);
        for size in 0..=10 {
            let v = s.sample_sorted(&mut rng, size);
            assert_eq!(v.len(), size);
            assert!(v.windows(2).all(|w| w[0] < w[1]));
            assert!(v.iter().all(|&x| x < 10));
        }
    }

    #[test]
    fn roughly_uniform_marginals() {
        let mut rng = stream_rng(1, 3);
        let mut s = SubsetSampler::new(6);
        let mut hits = [0u32; 6];
        let trials = 60_000;
        for _ in 0..trials {
            for &v in s.sample(&mut rng, 2) {
                hits[v] += 1;
            }
        }
        // each vertex is chosen with probability 1/3
        for h in hits {
            let p = h as f64 / trials as f64;
            assert!((p - 1.0 / 3.0).abs() < 0.01, "{p}");
        }
    }

    #[test]
    fn streams_reproducible() {
        let a: Vec<u32> = (0..4).map(|_| stream_rng(5, 2).random()).collect();
        let b: Vec<u32> = (0..4).map(|_| stream_rng(5, 2).random()).collect();
        assert_eq!(a, b);
        assert_ne!(stream_rng(5, 2).random::<u64>(), stream_rng(5, 3).random::<u64>());
        assert_ne!(derive_seed(1, 2), derive_seed(1, 3));
    }
}
