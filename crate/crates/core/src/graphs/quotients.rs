//! The circle graph of a cyclic word and its principal quotients: images of
//! the circle under collapsing a vertex partition and folding.

use std::ops::ControlFlow;

use super::{AGraph, Edge, EdgeId, EdgePath};
use crate::error::{invalid, Result};
use crate::words::CyclicWord;

/// A cycle of `|w|` vertices reading `w` once around from vertex 0.
///
/// Edge `i` joins vertex `i` to vertex `i + 1` and carries letter `i` of `w`.
pub fn circle_graph(w: &CyclicWord) -> Result<AGraph> {
    if w.is_empty() {
        return invalid("the circle graph of the empty word is undefined");
    }
    let n = w.len();
    let edges: Vec<_> = w.letters().iter().enumerate().map(|(i, &x)| (i, (i + 1) % n, x)).collect();
    AGraph::from_labeled_edges(w.rank(), n, 0, &edges)
}

/// The loop reading `w` around [`circle_graph`].
pub fn circle_loop(w: &CyclicWord) -> EdgePath {
    EdgePath {
        start: 0,
        edges: w.letters().iter().enumerate().map(|(i, x)| EdgeId::new(i, x.is_inverse())).collect(),
    }
}

/// A folded quotient of the circle graph with the image of every circle vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    pub graph: AGraph,
    pub vertex_map: Vec<usize>,
}

/// Restricted growth strings of length `n` with exactly `k` distinct values,
/// in lexicographic order.
#[derive(Clone, Debug)]
pub struct BlockPartitions {
    n: usize,
    k: usize,
    current: Option<Vec<usize>>,
}

impl BlockPartitions {
    pub fn new(n: usize, k: usize) -> BlockPartitions {
        let current = (n >= 1 && k >= 1 && k <= n).then(|| {
            let mut a = vec![0; n];
            for j in 1..k {
                a[n - k + j] = j;
            }
            a
        });
        BlockPartitions { n, k, current }
    }

    fn advance(&self, a: &[usize]) -> Option<Vec<usize>> {
        let (n, k) = (self.n, self.k);
        let mut prefix_max = vec![0; n];
        for i in 1..n {
            prefix_max[i] = prefix_max[i - 1].max(a[i]);
        }
        for i in (1..n).rev() {
            let value = a[i] + 1;
            if value > prefix_max[i - 1] + 1 || value >= k {
                continue;
            }
            let m = prefix_max[i - 1].max(value);
            let free = n - 1 - i;
            if free < k - 1 - m {
                continue;
            }
            let mut b = a[..i].to_vec();
            b.push(value);
            b.resize(n, 0);
            for (offset, v) in (m + 1..k).enumerate() {
                b[n - (k - 1 - m) + offset] = v;
            }
            return Some(b);
        }
        None
    }
}

impl Iterator for BlockPartitions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let a = self.current.take()?;
        self.current = self.advance(&a);
        Some(a)
    }
}

/// Collapse the circle graph of `w` along `blocks` and fold.
pub fn collapse(w: &CyclicWord, blocks: &[usize]) -> Quotient {
    let n = w.len();
    let k = blocks.iter().max().map_or(0, |m| m + 1);
    let edges = w
        .letters()
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let (from, to) = (blocks[i], blocks[(i + 1) % n]);
            if x.is_inverse() {
                Edge { from: to, to: from, generator: x.generator() }
            } else {
                Edge { from, to, generator: x.generator() }
            }
        })
        .collect();
    let collapsed = AGraph::build(w.rank(), k, blocks[0], edges);
    let (graph, map) = collapsed.fold_with_map();
    Quotient { graph, vertex_map: blocks.iter().map(|&b| map[b]).collect() }
}

/// Every set partition of the circle's vertices, by number of blocks, with
/// its folded collapse. Distinct partitions may give equal quotients.
pub struct PrincipalQuotients {
    word: CyclicWord,
    blocks: usize,
    partitions: BlockPartitions,
}

impl Iterator for PrincipalQuotients {
    type Item = (Vec<usize>, Quotient);

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            if let Some(p) = self.partitions.next() {
                let q = collapse(&self.word, &p);
                return Some((p, q));
            }
            if self.blocks >= self.word.len() {
                return None;
            }
            self.blocks += 1;
            self.partitions = BlockPartitions::new(self.word.len(), self.blocks);
        }
    }
}

pub fn principal_quotients(w: &CyclicWord) -> Result<PrincipalQuotients> {
    if w.is_empty() {
        return invalid("principal quotients need a nonempty word");
    }
    Ok(PrincipalQuotients { word: w.clone(), blocks: 1, partitions: BlockPartitions::new(w.len(), 1) })
}

struct LevelSearch<'a, F> {
    w: &'a CyclicWord,
    k: usize,
    width: usize,
    table: Vec<Option<usize>>,
    assigned: Vec<usize>,
    visit: F,
    emitted: u64,
}

impl<F: FnMut(Quotient) -> ControlFlow<()>> LevelSearch<'_, F> {
    fn slot(&self, v: usize, x: crate::words::Letter) -> usize {
        v * self.width + x.index()
    }

    fn emit(&mut self) -> ControlFlow<()> {
        let n = self.w.len();
        let mut edges: Vec<Edge> = Vec::with_capacity(n);
        for (i, &x) in self.w.letters().iter().enumerate() {
            let (from, to) = (self.assigned[i], self.assigned[(i + 1) % n]);
            let e = if x.is_inverse() {
                Edge { from: to, to: from, generator: x.generator() }
            } else {
                Edge { from, to, generator: x.generator() }
            };
            if !edges.contains(&e) {
                edges.push(e);
            }
        }
        self.emitted += 1;
        let graph = AGraph::build(self.w.rank(), self.k, 0, edges);
        debug_assert!(graph.is_folded());
        (self.visit)(Quotient { graph, vertex_map: self.assigned.clone() })
    }

    // Edge i runs from assigned[i] to the next vertex; choose that vertex.
    fn extend(&mut self, i: usize, max: usize) -> ControlFlow<()> {
        let n = self.w.len();
        let x = self.w.letters()[i];
        let v = self.assigned[i];
        let closing = i + 1 == n;
        let forced = self.table[self.slot(v, x)];
        let candidates: Vec<usize> = match (forced, closing) {
            (Some(t), true) => if t == 0 { vec![0] } else { vec![] },
            (Some(t), false) => vec![t],
            (None, true) => vec![0],
            (None, false) => (0..=(max + 1).min(self.k - 1)).collect(),
        };
        for t in candidates {
            let fresh = forced.is_none();
            if fresh && self.table[self.slot(t, x.inverse())].is_some() {
                continue;
            }
            let new_max = max.max(t);
            if closing {
                if new_max + 1 != self.k {
                    continue;
                }
            } else if n - (i + 2) < self.k - 1 - new_max {
                continue;
            }
            if fresh {
                let (a, b) = (self.slot(v, x), self.slot(t, x.inverse()));
                self.table[a] = Some(t);
                self.table[b] = Some(v);
            }
            let flow = if closing {
                self.emit()
            } else {
                self.assigned.push(t);
                let flow = self.extend(i + 1, new_max);
                self.assigned.pop();
                flow
            };
            if fresh {
                let (a, b) = (self.slot(v, x), self.slot(t, x.inverse()));
                self.table[a] = None;
                self.table[b] = None;
            }
            flow?;
        }
        ControlFlow::Continue(())
    }
}

/// Principal quotients with exactly `k` vertices whose collapse needs no
/// vertex identifications, in lexicographic order of their partitions.
///
/// Every quotient with `k` vertices arises from exactly one such partition, so
/// sweeping `k = 1, 2, ...` visits each principal quotient once, smallest
/// first. Returns the number of quotients visited.
pub fn quotients_at_level<F>(w: &CyclicWord, k: usize, visit: F) -> Result<u64>
where
    F: FnMut(Quotient) -> ControlFlow<()>,
{
    if w.is_empty() {
        return invalid("principal quotients need a nonempty word");
    }
    if k == 0 || k > w.len() {
        return Ok(0);
    }
    let width = 2 * w.rank() as usize;
    let mut search = LevelSearch {
        w,
        k,
        width,
        table: vec![None; k * width],
        assigned: vec![0],
        visit,
        emitted: 0,
    };
    let _ = search.extend(0, 0);
    Ok(search.emitted)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bell(n: usize) -> usize {
        // Bell triangle
        let mut row = vec![1usize];
        for _ in 1..n {
            let mut next = vec![*row.last().unwrap()];
            for &x in &row {
                next.push(next.last().unwrap() + x);
            }
            row = next;
        }
        *row.last().unwrap()
    }

    #[test]
    fn partition_counts_are_bell_numbers() {
        for n in 1..=7 {
            let w = CyclicWord::new(vec![crate::words::Letter::new(1, false); n], 2).unwrap();
            assert_eq!(principal_quotients(&w).unwrap().count(), bell(n));
        }
        assert_eq!(BlockPartitions::new(4, 2).count(), 7);
        assert_eq!(BlockPartitions::new(5, 3).count(), 25);
    }

    #[test]
    fn circle_graphs() {
        let g = circle_graph(&CyclicWord::parse("abAB", 2).unwrap()).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert!(g.is_folded());
        assert_eq!(g.core(), g);
        let g = circle_graph(&CyclicWord::parse("a", 2).unwrap()).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (1, 1));
    }

    #[test]
    fn level_search_matches_filtered_partitions() {
        for text in ["abAB", "aabb", "abaB", "aaab", "abbaBA"] {
            let w = CyclicWord::parse(text, 2).unwrap();
            for k in 1..=w.len() {
                let expected: Vec<AGraph> = BlockPartitions::new(w.len(), k)
                    .map(|p| collapse(&w, &p))
                    .filter(|q| q.graph.vertex_count() == k)
                    .map(|q| q.graph)
                    .collect();
                let mut got = Vec::new();
                quotients_at_level(&w, k, |q| {
                    got.push(q.graph);
                    ControlFlow::Continue(())
                })
                .unwrap();
                let canon = |v: &[AGraph]| v.iter().map(|g| g.canonical_code()).collect::<Vec<_>>();
                assert_eq!(canon(&got), canon(&expected), "{text} at level {k}");
            }
        }
    }
}
