//! Seeded inputs shared by the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use skein_core::freealg::SkeinElem;

/// `count` random words of length at most `max_len` over `letters` letters.
pub fn random_words(seed: u64, count: usize, letters: u8, max_len: usize) -> Vec<SkeinElem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let len = rng.gen_range(0..=max_len);
            SkeinElem::word((0..len).map(|_| rng.gen_range(0..letters)).collect())
        })
        .collect()
}
