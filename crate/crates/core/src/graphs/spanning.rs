//! Maximal trees, dual bases of the fundamental group, and the loop
//! constructions built on top of them.

use std::collections::VecDeque;

use serde::Serialize;

use super::{AGraph, EdgeId, EdgePath};
use crate::error::{invalid, Result};
use crate::words::{CyclicWord, Letter, Word};

/// A breadth-first maximal tree together with the dual free basis.
///
/// Letter `b_i` of the dual alphabet (generator `i`) stands for the loop
/// through the `i`-th positive non-tree edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpanningData {
    /// Positive edge indices in the tree.
    pub tree: Vec<usize>,
    /// Positive non-tree edge indices, ascending.
    pub complement: Vec<usize>,
    #[serde(skip)]
    pub dual_basis_loops: Vec<EdgePath>,
    #[serde(skip)]
    parent: Vec<Option<EdgeId>>,
    #[serde(skip)]
    depth: Vec<usize>,
    #[serde(skip)]
    slot: Vec<Option<usize>>,
    #[serde(skip)]
    base: usize,
}

impl SpanningData {
    /// Tree chosen breadth-first from the base, labels explored in order a, A, b, B, ...
    pub fn new(g: &AGraph) -> Result<SpanningData> {
        if !g.is_folded() {
            return invalid("spanning data needs a folded graph");
        }
        let n = g.vertex_count();
        let mut parent = vec![None; n];
        let mut depth = vec![usize::MAX; n];
        let mut in_tree = vec![false; g.edge_count()];
        depth[g.base()] = 0;
        let mut queue = VecDeque::from([g.base()]);
        while let Some(v) = queue.pop_front() {
            for x in Letter::alphabet(g.rank()) {
                if let Some(e) = g.step(v, x) {
                    let t = g.terminus(e);
                    if depth[t] == usize::MAX {
                        depth[t] = depth[v] + 1;
                        parent[t] = Some(e);
                        in_tree[e.index()] = true;
                        queue.push_back(t);
                    }
                }
            }
        }
        if depth.contains(&usize::MAX) {
            return invalid("spanning data needs a connected graph");
        }
        let tree: Vec<usize> = (0..g.edge_count()).filter(|&k| in_tree[k]).collect();
        let complement: Vec<usize> = (0..g.edge_count()).filter(|&k| !in_tree[k]).collect();
        let mut slot = vec![None; g.edge_count()];
        for (i, &k) in complement.iter().enumerate() {
            slot[k] = Some(i);
        }
        let mut sd = SpanningData {
            tree,
            complement,
            dual_basis_loops: Vec::new(),
            parent,
            depth,
            slot,
            base: g.base(),
        };
        sd.dual_basis_loops = sd
            .complement
            .iter()
            .map(|&k| sd.loop_through(g, &[EdgeId::new(k, false)]))
            .collect();
        Ok(sd)
    }

    /// Rank of the dual basis.
    pub fn dual_rank(&self) -> usize {
        self.complement.len()
    }

    /// The reduced tree path from `u` to `v`.
    pub fn tree_path(&self, g: &AGraph, u: usize, v: usize) -> Vec<EdgeId> {
        let (mut a, mut b) = (u, v);
        let mut up = Vec::new();
        let mut down = Vec::new();
        while self.depth[a] > self.depth[b] {
            let e = self.parent[a].expect("non-root vertex has a parent");
            up.push(e.reverse());
            a = g.origin(e);
        }
        while self.depth[b] > self.depth[a] {
            let e = self.parent[b].expect("non-root vertex has a parent");
            down.push(e);
            b = g.origin(e);
        }
        while a != b {
            let ea = self.parent[a].expect("non-root vertex has a parent");
            let eb = self.parent[b].expect("non-root vertex has a parent");
            up.push(ea.reverse());
            down.push(eb);
            a = g.origin(ea);
            b = g.origin(eb);
        }
        down.reverse();
        up.extend(down);
        up
    }

    /// The dual letter of an oriented edge, or `None` for tree edges.
    pub fn dual_letter(&self, e: EdgeId) -> Option<Letter> {
        self.slot[e.index()].map(|i| Letter::new(i as u32 + 1, e.is_reversed()))
    }

    fn dual_alphabet_rank(&self) -> u32 {
        self.dual_rank().max(1) as u32
    }

    /// `[base, o(e_1)] e_1 [t(e_1), o(e_2)] e_2 ... e_n [t(e_n), base]`.
    fn loop_through(&self, g: &AGraph, edges: &[EdgeId]) -> EdgePath {
        let mut path = EdgePath::empty(self.base);
        let mut at = self.base;
        for &e in edges {
            path.extend(&self.tree_path(g, at, g.origin(e)));
            path.edges.push(e);
            at = g.terminus(e);
        }
        path.extend(&self.tree_path(g, at, self.base));
        path
    }

    /// Rewrite a loop at the base in the dual basis: tree edges are dropped and
    /// every other edge becomes its dual letter.
    pub fn rewrite_loop(&self, g: &AGraph, p: &EdgePath) -> Result<Word> {
        if p.start != self.base || !p.is_consecutive(g) || !p.is_closed(g) {
            return invalid("rewriting needs a loop at the base vertex");
        }
        let letters: Vec<Letter> = p.edges.iter().filter_map(|&e| self.dual_letter(e)).collect();
        Word::free_reduce(&letters, self.dual_alphabet_rank())
    }

    /// Rewrite the conjugacy class of a loop.
    pub fn rewrite_loop_cyclic(&self, g: &AGraph, p: &EdgePath) -> Result<CyclicWord> {
        if !p.is_consecutive(g) || !p.is_closed(g) {
            return invalid("rewriting needs a closed path");
        }
        let mut lo = 0;
        let mut hi = p.edges.len();
        while hi >= lo + 2 && p.edges[lo] == p.edges[hi - 1].reverse() {
            lo += 1;
            hi -= 1;
        }
        let letters: Vec<Letter> = p.edges[lo..hi].iter().filter_map(|&e| self.dual_letter(e)).collect();
        Ok(CyclicWord::from_word(&Word::free_reduce(&letters, self.dual_alphabet_rank())?))
    }
}

pub fn spanning_data(g: &AGraph) -> Result<SpanningData> {
    SpanningData::new(g)
}

/// The loop at the base spelling the dual word `u`.
pub fn delta_path(g: &AGraph, sd: &SpanningData, u: &Word) -> Result<EdgePath> {
    if u.is_empty() {
        return invalid("the dual word must be nonempty");
    }
    let mut edges = Vec::with_capacity(u.len());
    for &x in u.letters() {
        let i = x.generator() as usize - 1;
        if i >= sd.dual_rank() {
            return invalid(format!("dual letter {x} exceeds the dual rank {}", sd.dual_rank()));
        }
        edges.push(EdgeId::new(sd.complement[i], x.is_inverse()));
    }
    Ok(sd.loop_through(g, &edges))
}

/// `b_r^2 b_1^2 b_2^2 ... b_r^2` over a rank-`r` alphabet.
pub fn alpha_word(r: usize) -> Result<Word> {
    if r == 0 {
        return invalid("the dual rank must be at least 1");
    }
    let mut letters = vec![Letter::new(r as u32, false); 2];
    for i in 1..=r {
        letters.extend([Letter::new(i as u32, false); 2]);
    }
    Word::free_reduce(&letters, r as u32)
}

pub fn alpha_path(g: &AGraph, sd: &SpanningData) -> Result<EdgePath> {
    delta_path(g, sd, &alpha_word(sd.dual_rank())?)
}

/// A reduced word containing every reduced word of length 3 as a factor.
///
/// The length-3 words are listed in lexicographic order (a < A < b < ...) and
/// concatenated; where a junction would cancel, the smallest letter that keeps
/// it reduced is inserted.
pub fn universal_three_word(r: usize) -> Result<Word> {
    if r < 2 {
        return invalid("the universal length-3 word needs rank at least 2");
    }
    let blocks = crate::words::enumerate_reduced(3, r as u32);
    let mut letters: Vec<Letter> = Vec::new();
    for block in blocks {
        let first = block.letters()[0];
        if let Some(&last) = letters.last() {
            if last == first.inverse() {
                let y = Letter::alphabet(r as u32)
                    .find(|&y| y != last.inverse() && y != first.inverse())
                    .expect("rank at least 2 leaves a free letter");
                letters.push(y);
            }
        }
        letters.extend_from_slice(block.letters());
    }
    Word::free_reduce(&letters, r as u32)
}

pub fn beta_path(g: &AGraph, sd: &SpanningData) -> Result<EdgePath> {
    delta_path(g, sd, &universal_three_word(sd.dual_rank())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::contains_factor;

    #[test]
    fn rose_has_empty_tree() {
        let rose = AGraph::rose(2);
        let sd = SpanningData::new(&rose).unwrap();
        assert!(sd.tree.is_empty());
        assert_eq!(sd.complement, vec![0, 1]);
        let p = rose.trace(0, Word::parse("aB", 2).unwrap().letters()).unwrap();
        assert_eq!(sd.rewrite_loop(&rose, &p).unwrap().to_string(), "aB");
    }

    #[test]
    fn alpha_on_roses() {
        let rose = AGraph::rose(2);
        let sd = SpanningData::new(&rose).unwrap();
        let a = alpha_path(&rose, &sd).unwrap();
        assert_eq!(a.word(&rose).to_string(), "bbaabb");
        let rose3 = AGraph::rose(3);
        let sd3 = SpanningData::new(&rose3).unwrap();
        assert_eq!(alpha_path(&rose3, &sd3).unwrap().word(&rose3).to_string(), "ccaabbcc");
    }

    #[test]
    fn universal_word_sizes() {
        for (r, l) in [(2usize, 36usize), (3, 150)] {
            let u = universal_three_word(r).unwrap();
            assert!(u.len() < 4 * l);
            for v in crate::words::enumerate_reduced(3, r as u32) {
                assert!(contains_factor(v.letters(), u.letters()), "{v} missing");
            }
        }
        assert!(universal_three_word(1).is_err());
    }

    #[test]
    fn loop_in_tree_rewrites_to_empty() {
        let g = AGraph::from_labeled_edges(
            2,
            2,
            0,
            &[
                (0, 1, Letter::new(1, false)),
                (1, 0, Letter::new(1, false)),
                (0, 0, Letter::new(2, false)),
                (1, 1, Letter::new(2, false)),
            ],
        )
        .unwrap();
        let sd = SpanningData::new(&g).unwrap();
        assert_eq!(sd.tree, vec![0]);
        let there_and_back = EdgePath { start: 0, edges: vec![EdgeId::new(0, false), EdgeId::new(0, true)] };
        assert!(sd.rewrite_loop(&g, &there_and_back).unwrap().is_empty());
        for (i, s) in sd.dual_basis_loops.iter().enumerate() {
            let w = sd.rewrite_loop(&g, s).unwrap();
            assert_eq!(w.letters(), &[Letter::new(i as u32 + 1, false)]);
        }
        let open = EdgePath { start: 0, edges: vec![EdgeId::new(0, false)] };
        assert!(sd.rewrite_loop(&g, &open).is_err());
    }
}
