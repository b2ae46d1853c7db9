use std::collections::HashSet;

use freeidx::factor::contains_factor;
use freeidx::graphs::{
    alpha_path, alpha_word, barysh_word, beta_path, circle_graph, connector_path, covers_all_edges, enumerate_covers,
    euler_word, permutation_covers, universal_three_word,
};
use freeidx::whitehead::is_primitive;
use freeidx::words::{cyclically_reduced_words, enumerate_reduced};
use freeidx::{AGraph, CyclicWord, Edge, EdgeId, SpanningData, Word};
use proptest::prelude::*;

fn random_graph() -> impl Strategy<Value = AGraph> {
    (1usize..7).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n, 1u32..=2), 1..12)
            .prop_map(move |es| {
                let edges = es.into_iter().map(|(from, to, generator)| Edge { from, to, generator }).collect();
                AGraph::new(2, n, 0, edges).unwrap()
            })
    })
}

fn relabel(g: &AGraph, perm: &[usize], order: &[usize]) -> AGraph {
    let edges = order
        .iter()
        .map(|&k| {
            let e = g.edges()[k];
            Edge { from: perm[e.from], to: perm[e.to], generator: e.generator }
        })
        .collect();
    AGraph::new(g.rank(), g.vertex_count(), perm[g.base()], edges).unwrap()
}

fn directed_edges(g: &AGraph) -> Vec<EdgeId> {
    (0..g.edge_count()).flat_map(|k| [EdgeId::new(k, false), EdgeId::new(k, true)]).collect()
}

proptest! {
    #[test]
    fn folding_is_confluent(g in random_graph(), seed in any::<u64>()) {
        prop_assume!(g.is_connected());
        let n = g.vertex_count();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut order: Vec<usize> = (0..g.edge_count()).collect();
        // cheap deterministic shuffles driven by the seed
        let mut s = seed;
        for v in [&mut perm, &mut order] {
            for i in (1..v.len()).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                v.swap(i, (s >> 33) as usize % (i + 1));
            }
        }
        let f = g.fold();
        let h = relabel(&g, &perm, &order).fold();
        prop_assert!(f.is_folded() && h.is_folded());
        prop_assert!(f.vertex_count() <= n);
        prop_assert_eq!(f.canonical_code(), h.canonical_code());
    }

    #[test]
    fn dual_rank_is_cyclomatic(g in random_graph()) {
        prop_assume!(g.is_connected());
        let c = g.fold().core();
        let sd = SpanningData::new(&c).unwrap();
        prop_assert_eq!(sd.complement.len() + c.vertex_count(), c.edge_count() + 1);
        prop_assert_eq!(sd.tree.len() + 1, c.vertex_count());
        for p in &sd.dual_basis_loops {
            prop_assert!(p.start == c.base() && p.is_closed(&c) && p.is_reduced() && p.is_consecutive(&c));
        }
    }
}

#[test]
fn completed_circle_makes_the_word_primitive() {
    for n in 1..=6 {
        for w in cyclically_reduced_words(n, 2) {
            let cover = circle_graph(&w).unwrap().complete_to_cover().unwrap();
            assert!(cover.is_cover() && cover.vertex_count() == n);
            let p = cover.trace(cover.base(), w.letters()).unwrap();
            assert!(p.is_closed(&cover));
            let sd = SpanningData::new(&cover).unwrap();
            let rewritten = sd.rewrite_loop_cyclic(&cover, &p).unwrap();
            assert!(is_primitive(&rewritten.to_word()).unwrap(), "{w}");
        }
    }
}

#[test]
fn commutator_circle_completes_to_a_cover() {
    let w = CyclicWord::parse("abAB", 2).unwrap();
    let c = circle_graph(&w).unwrap();
    assert!(c.is_folded() && !c.is_cover());
    let cover = c.complete_to_cover().unwrap();
    assert!(cover.is_cover());
    assert_eq!(cover.vertex_count(), 4);
    assert!(cover.trace(cover.base(), w.letters()).unwrap().is_closed(&cover));
}

#[test]
fn barysh_words_cover_every_edge() {
    for d in 1..=4 {
        for g in enumerate_covers(2, d).unwrap() {
            let e = euler_word(&g).unwrap();
            assert_eq!(e.len(), 2 * d);
            assert!(e.letters().iter().all(|x| !x.is_inverse()));
            let v = barysh_word(&g).unwrap();
            assert_eq!(v.len(), 2 * d * d);
            assert!((0..d).all(|x| covers_all_edges(&g, x, &v)));
        }
    }
}

#[test]
fn truncated_barysh_word_misses_edges() {
    let truncated_fails = |g: &AGraph| {
        let v = barysh_word(g).unwrap();
        let head = Word::free_reduce(&v.letters()[..2 * g.vertex_count()], 2).unwrap();
        (0..g.vertex_count()).any(|x| !covers_all_edges(g, x, &head))
    };
    // index-2 subgroups are normal, so an Euler circuit closes at every vertex
    assert!(!enumerate_covers(2, 2).unwrap().iter().any(truncated_fails));
    assert!(enumerate_covers(2, 3).unwrap().iter().any(truncated_fails));
}

#[test]
fn dual_loops_rewrite_to_their_defining_words() {
    for d in 1..=3 {
        for g in enumerate_covers(2, d).unwrap() {
            let sd = SpanningData::new(&g).unwrap();
            let r = sd.dual_rank();
            assert_eq!(r, d + 1);
            let alpha = alpha_path(&g, &sd).unwrap();
            assert!(alpha.is_closed(&g) && alpha.is_reduced());
            assert!(alpha.len() <= 2 * d * d + 4 * d);
            assert_eq!(sd.rewrite_loop(&g, &alpha).unwrap(), alpha_word(r).unwrap());
            let beta = beta_path(&g, &sd).unwrap();
            assert!(beta.is_closed(&g) && beta.is_reduced());
            assert!(beta.len() <= 500 * d.pow(4) * 8);
            assert_eq!(sd.rewrite_loop(&g, &beta).unwrap(), universal_three_word(r).unwrap());
        }
    }
}

#[test]
fn universal_word_blocks() {
    for r in [2usize, 3] {
        let u = universal_three_word(r).unwrap();
        let big_l = 2 * r * (2 * r - 1) * (2 * r - 1);
        assert!(u.len() < 4 * big_l);
        let all: Vec<Word> = enumerate_reduced(3, r as u32).collect();
        assert_eq!(all.len(), big_l);
        assert!(all.iter().all(|s| contains_factor(s.letters(), u.letters())));
        let lost = |cut: &[freeidx::Letter]| all.iter().filter(|s| !contains_factor(s.letters(), cut)).count();
        // the last block is repeated across earlier junctions, the first is not
        assert_eq!(lost(&u.letters()[..u.len() - 3]), 0, "rank {r}");
        assert_eq!(lost(&u.letters()[3..]), 1, "rank {r}");
    }
}

#[test]
fn sims_census_matches_transitive_tuples() {
    for d in 1..=4usize {
        let sims = enumerate_covers(2, d).unwrap();
        let mut tuples = 0usize;
        let mut codes = HashSet::new();
        for g in permutation_covers(2, d).unwrap() {
            tuples += 1;
            codes.insert(g.canonical_code());
        }
        let fact: usize = (1..d).product();
        assert_eq!(tuples, sims.len() * fact, "degree {d}");
        let sims_codes: HashSet<_> = sims.iter().map(|g| g.canonical_code()).collect();
        assert_eq!(codes, sims_codes);
    }
}

#[test]
fn connectors_are_short_and_reduced() {
    let mut graphs: Vec<AGraph> = (1..=3).flat_map(|d| enumerate_covers(2, d).unwrap()).collect();
    // theta graph: three arcs between two vertices
    graphs.push(AGraph::new(
        2,
        2,
        0,
        vec![Edge { from: 0, to: 1, generator: 1 }, Edge { from: 0, to: 1, generator: 2 }, Edge { from: 1, to: 0, generator: 1 }],
    )
    .unwrap());
    for g in &graphs {
        for &e1 in &directed_edges(g) {
            for &e2 in &directed_edges(g) {
                let p = connector_path(g, e1, e2).unwrap();
                assert!(p.is_reduced() && p.is_consecutive(g));
                assert_eq!((p.edges[0], *p.edges.last().unwrap()), (e1, e2));
                assert!(p.len() <= 3 * g.vertex_count());
            }
        }
    }
}

#[test]
fn rank_one_graphs_have_no_connectors() {
    let circle = circle_graph(&CyclicWord::parse("aaa", 2).unwrap()).unwrap();
    assert!(connector_path(&circle, EdgeId::new(0, false), EdgeId::new(0, true)).is_err());
}
