//! Uniform random reduced words via the non-backtracking walk, their subword
//! statistics, and the sampled simplicity-index experiment.

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::index::{d_simp_capped, Bounded, Budget};
use crate::words::{cyclic_reduce, enumerate_reduced, is_proper_power, Letter, Word, WordStats};

/// Identifier of the generator behind every sample, recorded in reports.
pub const RNG_ALGORITHM: &str = "chacha8";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WalkConfig {
    pub rank: u32,
    pub length: usize,
    pub seed: u64,
}

impl WalkConfig {
    pub fn new(rank: u32, length: usize, seed: u64) -> Result<WalkConfig> {
        if rank < 2 {
            return invalid("the walk needs rank at least 2");
        }
        if length == 0 {
            return invalid("the walk needs length at least 1");
        }
        Ok(WalkConfig { rank, length, seed })
    }

    /// Number of continuations at each step after the first.
    pub fn lambda(&self) -> u32 {
        2 * self.rank - 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WalkSample {
    pub word: Word,
    pub seed: u64,
    pub stats: WordStats,
}

/// Seed of trial `index` under a master seed (SplitMix64 finaliser).
pub fn trial_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// First letter uniform over all `2N` letters, then uniform over the `2N - 1`
/// letters that do not cancel the previous one.
pub fn walk_letters<R: Rng>(rng: &mut R, rank: u32, n: usize) -> Vec<Letter> {
    let m = 2 * rank as usize;
    let mut out = Vec::with_capacity(n);
    if n == 0 {
        return out;
    }
    let mut prev = Letter::from_index(rng.gen_range(0..m));
    out.push(prev);
    for _ in 1..n {
        let forbidden = prev.inverse().index();
        let k = rng.gen_range(0..m - 1);
        prev = Letter::from_index(if k >= forbidden { k + 1 } else { k });
        out.push(prev);
    }
    out
}

fn sample_letters(cfg: &WalkConfig) -> Vec<Letter> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    walk_letters(&mut rng, cfg.rank, cfg.length)
}

pub fn sample_word(cfg: &WalkConfig) -> Result<WalkSample> {
    sample_word_with_queries(cfg, &[])
}

pub fn sample_word_with_queries(cfg: &WalkConfig, queries: &[Word]) -> Result<WalkSample> {
    let cfg = WalkConfig::new(cfg.rank, cfg.length, cfg.seed)?;
    let word = Word::free_reduce(&sample_letters(&cfg), cfg.rank)?;
    debug_assert_eq!(word.len(), cfg.length);
    let stats = WordStats::compute(&word, queries);
    Ok(WalkSample { word, seed: cfg.seed, stats })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumEntry {
    pub sigma: Word,
    pub count: usize,
    pub deviation: f64,
    pub within_band: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubwordSpectrum {
    pub word_length: usize,
    pub sigma_length: usize,
    pub ell: f64,
    pub epsilon: f64,
    /// `(2N - 1) / (2N) * n^(1 - ell)`.
    pub reference: f64,
    /// `n * mu(sigma)` for the actual `sigma` length.
    pub expected: f64,
    /// `n^(epsilon + (1 - ell) / 2)`.
    pub band: f64,
    pub max_deviation: f64,
    pub all_within_band: bool,
    pub entries: Vec<SpectrumEntry>,
}

pub const DEFAULT_ELL: f64 = 0.5;
pub const DEFAULT_EPSILON: f64 = 0.2;

/// Occurrence counts of every reduced word of length
/// `round(ell * log n / log(2N - 1))` in `w`, compared with the reference
/// count and the concentration band.
pub fn subword_spectrum(w: &Word, ell: f64, epsilon: f64) -> Result<SubwordSpectrum> {
    if !(0.0 < ell && ell < 1.0) {
        return invalid("ell must lie strictly between 0 and 1");
    }
    if w.rank() < 2 || w.len() < 2 {
        return invalid("the spectrum needs rank at least 2 and a word of length at least 2");
    }
    let n = w.len() as f64;
    let m = 2.0 * w.rank() as f64;
    let lambda = m - 1.0;
    let sigma_length = ((ell * n.ln() / lambda.ln()).round() as usize).clamp(1, w.len());
    let reference = lambda / m * n.powf(1.0 - ell);
    let expected = n / (m * lambda.powi(sigma_length as i32 - 1));
    let band = n.powf(epsilon + (1.0 - ell) / 2.0);
    let mut counts: HashMap<&[Letter], usize> = HashMap::new();
    for window in w.letters().windows(sigma_length) {
        *counts.entry(window).or_default() += 1;
    }
    let entries: Vec<SpectrumEntry> = enumerate_reduced(sigma_length, w.rank())
        .map(|sigma| {
            let count = counts.get(sigma.letters()).copied().unwrap_or(0);
            let deviation = count as f64 - reference;
            SpectrumEntry { sigma, count, deviation, within_band: deviation.abs() < band }
        })
        .collect();
    let max_deviation = entries.iter().map(|e| e.deviation.abs()).fold(0.0, f64::max);
    Ok(SubwordSpectrum {
        word_length: w.len(),
        sigma_length,
        ell,
        epsilon,
        reference,
        expected,
        band,
        max_deviation,
        all_within_band: entries.iter().all(|e| e.within_band),
        entries,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IotaStats {
    pub samples: usize,
    pub mean: f64,
    pub max: usize,
    pub histogram: BTreeMap<usize, usize>,
    pub epsilon0: f64,
    pub fraction_exceeding: f64,
}

/// Distribution of the conjugating-prefix length over samples.
pub fn iota_stat(samples: &[Word], epsilon0: f64) -> IotaStats {
    let mut histogram = BTreeMap::new();
    let mut total = 0usize;
    let mut exceeding = 0usize;
    for w in samples {
        let iota = cyclic_reduce(w).0.len();
        *histogram.entry(iota).or_default() += 1;
        total += iota;
        if iota as f64 > epsilon0 * w.len() as f64 {
            exceeding += 1;
        }
    }
    let count = samples.len().max(1) as f64;
    IotaStats {
        samples: samples.len(),
        mean: total as f64 / count,
        max: histogram.keys().next_back().copied().unwrap_or(0),
        histogram,
        epsilon0,
        fraction_exceeding: exceeding as f64 / count,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialResult {
    pub index: u64,
    pub seed: u64,
    pub word: Word,
    pub d_simp: Bounded,
    pub proper_power: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub rng: &'static str,
    pub rank: u32,
    pub length: usize,
    pub master_seed: u64,
    pub trials: usize,
    pub d_cap: usize,
    /// Keys are exact values, or `">cap"` for censored trials.
    pub distribution: BTreeMap<String, usize>,
    /// `(k, fraction of trials with d_simp >= k)` for `k = 1..=cap + 1`.
    pub fraction_at_least: Vec<(usize, f64)>,
    pub proper_power_fraction: f64,
    pub results: Vec<TrialResult>,
}

/// Sample `trials` words and compute their simplicity index up to `d_cap`.
pub fn experiment_dsimp(cfg: &WalkConfig, trials: usize, d_cap: usize, budget: &Budget) -> Result<ExperimentReport> {
    let cfg = WalkConfig::new(cfg.rank, cfg.length, cfg.seed)?;
    if d_cap == 0 {
        return invalid("d_cap must be at least 1");
    }
    let results = (0..trials as u64)
        .into_par_iter()
        .map(|index| -> Result<TrialResult> {
            let seed = trial_seed(cfg.seed, index);
            let word = Word::free_reduce(&sample_letters(&WalkConfig { seed, ..cfg }), cfg.rank)?;
            let core = cyclic_reduce(&word).1;
            let d_simp = d_simp_capped(&core, d_cap, budget)?;
            let proper_power = is_proper_power(&core)?.is_power;
            Ok(TrialResult { index, seed, word, d_simp, proper_power })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut distribution = BTreeMap::new();
    for r in &results {
        let key = match r.d_simp {
            Bounded::Exact(v) => format!("{v}"),
            Bounded::Exceeds(c) => format!(">{c}"),
        };
        *distribution.entry(key).or_default() += 1;
    }
    let denom = trials.max(1) as f64;
    let fraction_at_least = (1..=d_cap + 1)
        .map(|k| {
            let hits = results
                .iter()
                .filter(|r| match r.d_simp {
                    Bounded::Exact(v) => v >= k,
                    Bounded::Exceeds(c) => c + 1 >= k,
                })
                .count();
            (k, hits as f64 / denom)
        })
        .collect();
    let proper_power_fraction = results.iter().filter(|r| r.proper_power).count() as f64 / denom;
    Ok(ExperimentReport {
        rng: RNG_ALGORITHM,
        rank: cfg.rank,
        length: cfg.length,
        master_seed: cfg.seed,
        trials,
        d_cap,
        distribution,
        fraction_at_least,
        proper_power_fraction,
        results,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairFrequency {
    pub sigma: Word,
    pub mean: f64,
    pub standard_error: f64,
    pub z: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairFrequencyReport {
    pub rank: u32,
    pub length: usize,
    pub samples: usize,
    pub master_seed: u64,
    pub expected: f64,
    pub entries: Vec<PairFrequency>,
    pub max_z: f64,
}

/// Per-sample frequency of each reduced two-letter word among the `n - 1`
/// windows, averaged over independent samples, with the standard error of the mean.
pub fn pair_frequency_study(rank: u32, n: usize, samples: usize, master_seed: u64) -> Result<PairFrequencyReport> {
    let cfg = WalkConfig::new(rank, n, master_seed)?;
    if n < 2 || samples < 2 {
        return invalid("the study needs words of length at least 2 and at least 2 samples");
    }
    let m = 2 * rank as usize;
    let windows = (n - 1) as f64;
    let (sum, sum_sq) = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let letters = sample_letters(&WalkConfig { seed: trial_seed(master_seed, i), ..cfg });
            let mut counts = vec![0u32; m * m];
            for p in letters.windows(2) {
                counts[p[0].index() * m + p[1].index()] += 1;
            }
            let freq: Vec<f64> = counts.iter().map(|&c| c as f64 / windows).collect();
            let sq: Vec<f64> = freq.iter().map(|f| f * f).collect();
            (freq, sq)
        })
        .reduce(
            || (vec![0.0; m * m], vec![0.0; m * m]),
            |(mut a, mut b), (c, d)| {
                for i in 0..a.len() {
                    a[i] += c[i];
                    b[i] += d[i];
                }
                (a, b)
            },
        );
    let k = samples as f64;
    let expected = 1.0 / (m * (m - 1)) as f64;
    let entries: Vec<PairFrequency> = enumerate_reduced(2, rank)
        .map(|sigma| {
            let i = sigma.letters()[0].index() * m + sigma.letters()[1].index();
            let mean = sum[i] / k;
            let var = ((sum_sq[i] - k * mean * mean) / (k - 1.0)).max(0.0);
            let standard_error = (var / k).sqrt();
            let z = if standard_error > 0.0 { (mean - expected).abs() / standard_error } else { f64::INFINITY };
            PairFrequency { sigma, mean, standard_error, z }
        })
        .collect();
    let max_z = entries.iter().map(|e| e.z).fold(0.0, f64::max);
    Ok(PairFrequencyReport { rank, length: n, samples, master_seed, expected, entries, max_z })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_are_reduced_and_deterministic() {
        let cfg = WalkConfig::new(2, 500, 7).unwrap();
        let a = sample_word(&cfg).unwrap();
        let b = sample_word(&cfg).unwrap();
        assert_eq!(a.word.to_string(), b.word.to_string());
        assert_eq!(a.word.len(), 500);
        let c = sample_word(&WalkConfig::new(2, 500, 8).unwrap()).unwrap();
        assert_ne!(a.word, c.word);
    }

    #[test]
    fn first_letter_is_uniform() {
        let mut counts = [0usize; 4];
        for i in 0..100_000u64 {
            let w = sample_letters(&WalkConfig::new(2, 1, trial_seed(3, i)).unwrap());
            counts[w[0].index()] += 1;
        }
        let chi2: f64 = counts.iter().map(|&c| (c as f64 - 25_000.0).powi(2) / 25_000.0).sum();
        // 3 degrees of freedom; 16.27 is the 0.999 quantile
        assert!(chi2 < 16.27, "chi-square {chi2}");
    }

    #[test]
    fn spectrum_shape() {
        let w = sample_word(&WalkConfig::new(2, 10_000, 1).unwrap()).unwrap().word;
        let s = subword_spectrum(&w, DEFAULT_ELL, DEFAULT_EPSILON).unwrap();
        assert_eq!(s.sigma_length, 4);
        assert_eq!(s.entries.len(), 4 * 27);
        assert_eq!(s.entries.iter().map(|e| e.count).sum::<usize>(), 10_000 - 3);
        assert!(subword_spectrum(&w, 1.0, 0.2).is_err());
    }

    #[test]
    fn small_experiment() {
        let cfg = WalkConfig::new(2, 6, 11).unwrap();
        let r = experiment_dsimp(&cfg, 50, 4, &Budget::unlimited()).unwrap();
        assert_eq!(r.results.len(), 50);
        for t in &r.results {
            if let Bounded::Exact(v) = t.d_simp {
                assert!(v <= 6);
            }
        }
        assert_eq!(r.distribution.values().sum::<usize>(), 50);
    }

    #[test]
    fn iota_lengths() {
        let words = vec![Word::parse("abA", 2).unwrap(), Word::parse("ab", 2).unwrap()];
        let s = iota_stat(&words, 0.25);
        assert_eq!(s.max, 1);
        assert_eq!(s.fraction_exceeding, 0.5);
    }
}
