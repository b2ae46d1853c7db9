use freeidx::words::{
    cyclic_reduce, cyclically_reduced_words, enumerate_reduced, is_proper_power, sphere_size, subword_count,
};
use freeidx::{CyclicWord, Letter, Word};
use proptest::prelude::*;

fn letters(rank: u32, max_len: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec((0..2 * rank as usize).prop_map(Letter::from_index), 0..=max_len)
}

fn naive_reduce(raw: &[Letter]) -> Vec<Letter> {
    let mut v = raw.to_vec();
    loop {
        match v.windows(2).position(|p| p[0] == p[1].inverse()) {
            Some(i) => {
                v.drain(i..i + 2);
            }
            None => return v,
        }
    }
}

proptest! {
    #[test]
    fn free_reduce_matches_naive_and_is_idempotent(raw in letters(3, 40)) {
        let w = Word::free_reduce(&raw, 3).unwrap();
        prop_assert_eq!(w.letters().to_vec(), naive_reduce(&raw));
        prop_assert_eq!(Word::free_reduce(w.letters(), 3).unwrap(), w.clone());
        prop_assert!(w.mul(&w.inverse()).is_empty());
    }

    #[test]
    fn cyclic_reduction_reassembles(raw in letters(2, 30)) {
        let w = Word::free_reduce(&raw, 2).unwrap();
        let (c, core) = cyclic_reduce(&w);
        prop_assert!(core.to_word().is_cyclically_reduced());
        prop_assert_eq!(c.mul(&core.to_word()).mul(&c.inverse()), w);
    }

    #[test]
    fn proper_power_matches_brute_force(raw in letters(2, 12)) {
        let w = Word::free_reduce(&raw, 2).unwrap();
        prop_assume!(!w.is_empty() && w.is_cyclically_reduced());
        let cw = CyclicWord::from_word(&w);
        let n = w.len();
        let brute = (2..=n).any(|k| n.is_multiple_of(k) && {
            let root = Word::free_reduce(&w.letters()[..n / k], 2).unwrap();
            (0..n).any(|s| root.pow(k).letters() == cw.rotate(s).letters())
        });
        let d = is_proper_power(&cw).unwrap();
        prop_assert_eq!(d.is_power, brute);
        prop_assert_eq!(d.root.to_word().pow(d.exponent), w);
    }

    #[test]
    fn subword_count_matches_naive(raw in letters(2, 10_000), pat in letters(2, 3)) {
        let w = Word::free_reduce(&raw, 2).unwrap();
        let sigma = Word::free_reduce(&pat, 2).unwrap();
        prop_assume!(!sigma.is_empty());
        let naive = w.letters().windows(sigma.len()).filter(|x| *x == sigma.letters()).count();
        prop_assert_eq!(subword_count(&sigma, &w), naive);
    }

    #[test]
    fn text_round_trip(raw in letters(3, 20)) {
        let w = Word::free_reduce(&raw, 3).unwrap();
        prop_assert_eq!(Word::parse(&w.to_string(), 3).unwrap(), w);
    }
}

fn all_strings(n: usize, rank: u32) -> Vec<Vec<Letter>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| Letter::alphabet(rank).map(move |x| [p.clone(), vec![x]].concat()))
            .collect();
    }
    out
}

#[test]
fn reduced_and_cyclically_reduced_counts() {
    for rank in [2u32, 3] {
        let max_n = if rank == 2 { 8 } else { 6 };
        for n in 1..=max_n {
            let strings = all_strings(n, rank);
            let reduced: Vec<&Vec<Letter>> = strings.iter().filter(|s| naive_reduce(s).len() == n).collect();
            let cyclic = reduced.iter().filter(|s| s[0] != s[n - 1].inverse()).count();
            assert_eq!(sphere_size(n, rank), reduced.len() as u64);
            assert_eq!(enumerate_reduced(n, rank).count(), reduced.len());
            assert_eq!(cyclically_reduced_words(n, rank).count(), cyclic);
            let m = 2 * rank as i64 - 1;
            let closed = m.pow(n as u32) + 1 + (rank as i64 - 1) * (1 + (-1i64).pow(n as u32));
            assert_eq!(cyclic as i64, closed, "rank {rank}, n {n}");
        }
    }
}

#[test]
fn reduced_words_are_listed_in_order_without_repeats() {
    let words: Vec<Word> = enumerate_reduced(5, 2).collect();
    assert!(words.windows(2).all(|p| p[0].letters() < p[1].letters()));
}
