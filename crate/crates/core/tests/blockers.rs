use freeidx::blockers::{barysh_demo, blocking_word, forcing_word, witness_word};
use freeidx::factor::contains_factor;
use freeidx::graphs::{alpha_word, enumerate_covers};
use freeidx::index::Budget;
use freeidx::whitehead::{is_simple, rauzy3_full};
use freeidx::{AGraph, CyclicWord, Letter, SpanningData, Word};
use proptest::prelude::*;

fn covers_up_to(d: usize) -> Vec<AGraph> {
    (1..=d).flat_map(|k| enumerate_covers(2, k).unwrap()).collect()
}

fn cyclic_contains(pattern: &[Letter], w: &CyclicWord) -> bool {
    let doubled = [w.letters(), w.letters()].concat();
    pattern.len() <= w.len() && contains_factor(pattern, &doubled)
}

/// `prefix * tail` when it is cyclically reduced, keeps `prefix` intact and
/// closes up at the base of `g`.
fn closing_extension(g: &AGraph, prefix: &Word, tail: &[Letter]) -> Option<CyclicWord> {
    let z = prefix.mul(&Word::free_reduce(tail, 2).unwrap());
    let keeps = z.letters().starts_with(prefix.letters());
    let closes = g.walk(g.base(), z.letters()) == Some(g.base());
    (keeps && closes && z.is_cyclically_reduced()).then(|| CyclicWord::from_word(&z))
}

fn tail() -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec((0..4usize).prop_map(Letter::from_index), 0..12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]
    #[test]
    fn blocking_factor_forces_non_simple_rewrite(i in 0usize..17, t in tail()) {
        let g = &covers_up_to(3)[i];
        let v = blocking_word(g).unwrap().word;
        let Some(z) = closing_extension(g, &v, &t) else { return Ok(()) };
        let sd = SpanningData::new(g).unwrap();
        let p = g.trace(g.base(), z.letters()).unwrap();
        let rewritten = sd.rewrite_loop_cyclic(g, &p).unwrap();
        prop_assert!(cyclic_contains(alpha_word(sd.dual_rank()).unwrap().letters(), &rewritten));
        prop_assert!(!is_simple(&rewritten.to_word()).unwrap());
    }

    #[test]
    fn forcing_factor_certifies_filling(i in 0usize..4, t in tail()) {
        let g = &covers_up_to(2)[i];
        let w = forcing_word(g).unwrap().word;
        let Some(z) = closing_extension(g, &w, &t) else { return Ok(()) };
        let sd = SpanningData::new(g).unwrap();
        let p = g.trace(g.base(), z.letters()).unwrap();
        let rewritten = sd.rewrite_loop_cyclic(g, &p).unwrap();
        prop_assert!(rauzy3_full(&rewritten).unwrap());
    }
}

#[test]
fn blocker_bounds_on_small_covers() {
    for g in covers_up_to(3) {
        let d = g.vertex_count();
        let v = blocking_word(&g).unwrap();
        assert!(v.verified && v.word.len() <= 9 * d.pow(3));
        let w = forcing_word(&g).unwrap();
        assert!(w.verified && w.word.len() <= 8000 * d.pow(5));
        for (k, &piece) in w.pieces.iter().enumerate() {
            assert!(piece <= 500 * d.pow(4) * 8 + 3 * d, "piece {k} of degree {d}");
        }
    }
}

#[test]
fn rose_forcing_word_spells_all_length_three_words() {
    let rose = AGraph::rose(2);
    let w = forcing_word(&rose).unwrap();
    assert!(w.word.len() <= 8000);
    assert!(rauzy3_full(&CyclicWord::from_word(&w.word)).unwrap());
}

#[test]
fn witness_for_degree_three_is_certified() {
    let r = witness_word(3, 2, &Budget::unlimited()).unwrap();
    assert_eq!(r.census_size, 17);
    assert!(r.complete);
    assert!(r.word.len() as u64 <= r.length_bound);
    assert!(r.word.to_word().is_cyclically_reduced());
}

#[test]
fn barysh_demo_covers_everything() {
    for d in 1..=3 {
        let entries = barysh_demo(d, 2, &Budget::unlimited()).unwrap();
        assert!(entries.iter().all(|e| e.covers_from_every_vertex && e.word.len() == 2 * d * d));
    }
}
