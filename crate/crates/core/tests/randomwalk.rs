use std::collections::HashSet;

use freeidx::index::{Bounded, Budget};
use freeidx::randomwalk::{
    experiment_dsimp, iota_stat, sample_word, subword_spectrum, trial_seed, walk_letters, WalkConfig, DEFAULT_ELL,
    DEFAULT_EPSILON,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #[test]
    fn walks_are_reduced_with_exact_length(rank in 2u32..5, n in 1usize..500, seed in any::<u64>()) {
        let s = sample_word(&WalkConfig::new(rank, n, seed).unwrap()).unwrap();
        prop_assert_eq!(s.word.len(), n);
        prop_assert!(s.word.letters().windows(2).all(|p| p[0] != p[1].inverse()));
        prop_assert!(s.stats.iota_length <= n / 2);
        let again = sample_word(&WalkConfig::new(rank, n, seed).unwrap()).unwrap();
        prop_assert_eq!(s, again);
    }
}

#[test]
fn walk_letters_are_reproducible() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let first = walk_letters(&mut rng, 2, 100);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let again = walk_letters(&mut rng, 2, 100);
    assert_eq!(first, again);
}

#[test]
fn trial_seeds_are_distinct() {
    let seeds: HashSet<u64> = (0..10_000).map(|i| trial_seed(7, i)).collect();
    assert_eq!(seeds.len(), 10_000);
    assert_ne!(trial_seed(7, 0), trial_seed(8, 0));
}

#[test]
fn long_walks_rarely_have_long_prefixes() {
    let samples: Vec<_> =
        (0..200).map(|i| sample_word(&WalkConfig::new(2, 1000, trial_seed(3, i)).unwrap()).unwrap().word).collect();
    let stats = iota_stat(&samples, 0.05);
    assert_eq!(stats.samples, 200);
    assert!(stats.fraction_exceeding < 0.05);
    assert_eq!(stats.histogram.values().sum::<usize>(), 200);
}

#[test]
fn spectrum_counts_add_up() {
    let s = sample_word(&WalkConfig::new(2, 100_000, 11).unwrap()).unwrap();
    let spectrum = subword_spectrum(&s.word, DEFAULT_ELL, DEFAULT_EPSILON).unwrap();
    assert_eq!(spectrum.sigma_length, 5);
    let windows = s.word.len() + 1 - spectrum.sigma_length;
    assert_eq!(spectrum.entries.iter().map(|e| e.count).sum::<usize>(), windows);
    assert_eq!(spectrum.entries.len(), 4 * 3usize.pow(4));
}

#[test]
fn experiment_values_respect_length_bound() {
    let cfg = WalkConfig::new(2, 12, 2024).unwrap();
    let r = experiment_dsimp(&cfg, 200, 4, &Budget::unlimited()).unwrap();
    assert_eq!(r.results.len(), 200);
    assert_eq!(r.rng, "chacha8");
    assert_eq!(r.distribution.values().sum::<usize>(), 200);
    for t in &r.results {
        if let Bounded::Exact(d) = t.d_simp {
            assert!(d <= t.word.len());
        }
    }
    assert!(r.proper_power_fraction < 0.05);
    let again = experiment_dsimp(&cfg, 200, 4, &Budget::unlimited()).unwrap();
    assert_eq!(r, again);
}
