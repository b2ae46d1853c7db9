//! Labelled graphs over a free basis: folding, cores, covers, tracing, and
//! canonical forms for based isomorphism.

pub mod connector;
pub mod covers;
pub mod euler;
pub mod quotients;
pub mod spanning;

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{invalid, Error, Result};
use crate::words::{Letter, Word};

pub use connector::{connector_path, strict_connector_path};
pub use covers::{cover_from_permutations, enumerate_covers, for_each_cover, permutation_covers, PermutationCovers};
pub use euler::{barysh_word, covers_all_edges, euler_word};
pub use quotients::{circle_graph, circle_loop, principal_quotients, quotients_at_level, PrincipalQuotients, Quotient};
pub use spanning::{alpha_path, alpha_word, beta_path, delta_path, spanning_data, universal_three_word, SpanningData};

/// An oriented edge: positive edge `index` traversed forwards or backwards.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(usize);

impl EdgeId {
    pub fn new(index: usize, reversed: bool) -> EdgeId {
        EdgeId(2 * index + reversed as usize)
    }

    pub fn index(self) -> usize {
        self.0 / 2
    }

    pub fn is_reversed(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn reverse(self) -> EdgeId {
        EdgeId(self.0 ^ 1)
    }
}

/// A positively oriented edge labelled by a generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub generator: u32,
}

/// A finite connected graph with edges labelled by generators and a base vertex.
///
/// Only positive edges are stored; the reverse of edge `k` carries the inverse
/// label. Vertices are `0..vertex_count`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AGraph {
    rank: u32,
    vertex_count: usize,
    base: usize,
    edges: Vec<Edge>,
    // out[v * 2 * rank + letter index] = first edge leaving v with that label
    out: Vec<Option<EdgeId>>,
    folded: bool,
}

impl AGraph {
    pub fn new(rank: u32, vertex_count: usize, base: usize, edges: Vec<Edge>) -> Result<AGraph> {
        if rank == 0 {
            return invalid("rank must be at least 1");
        }
        if base >= vertex_count {
            return invalid(format!("base vertex {base} out of range"));
        }
        for e in &edges {
            if e.from >= vertex_count || e.to >= vertex_count {
                return invalid(format!("edge {e:?} has an endpoint out of range"));
            }
            if e.generator == 0 || e.generator > rank {
                return invalid(format!("edge {e:?} has a label outside rank {rank}"));
            }
        }
        Ok(AGraph::build(rank, vertex_count, base, edges))
    }

    /// Build from edges whose labels may be inverse letters.
    pub fn from_labeled_edges(
        rank: u32,
        vertex_count: usize,
        base: usize,
        edges: &[(usize, usize, Letter)],
    ) -> Result<AGraph> {
        let edges = edges
            .iter()
            .map(|&(from, to, x)| {
                if x.is_inverse() {
                    Edge { from: to, to: from, generator: x.generator() }
                } else {
                    Edge { from, to, generator: x.generator() }
                }
            })
            .collect();
        AGraph::new(rank, vertex_count, base, edges)
    }

    pub(crate) fn build(rank: u32, vertex_count: usize, base: usize, edges: Vec<Edge>) -> AGraph {
        let width = 2 * rank as usize;
        let mut out = vec![None; vertex_count * width];
        let mut folded = true;
        for (k, e) in edges.iter().enumerate() {
            let g = e.generator as usize - 1;
            for (v, slot, id) in [
                (e.from, 2 * g, EdgeId::new(k, false)),
                (e.to, 2 * g + 1, EdgeId::new(k, true)),
            ] {
                let cell = &mut out[v * width + slot];
                if cell.is_some() {
                    folded = false;
                } else {
                    *cell = Some(id);
                }
            }
        }
        AGraph { rank, vertex_count, base, edges, out, folded }
    }

    /// The rose: one vertex with one loop per generator.
    pub fn rose(rank: u32) -> AGraph {
        let edges = (1..=rank).map(|g| Edge { from: 0, to: 0, generator: g }).collect();
        AGraph::build(rank, 1, 0, edges)
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn origin(&self, e: EdgeId) -> usize {
        let edge = &self.edges[e.index()];
        if e.is_reversed() { edge.to } else { edge.from }
    }

    pub fn terminus(&self, e: EdgeId) -> usize {
        self.origin(e.reverse())
    }

    pub fn label(&self, e: EdgeId) -> Letter {
        Letter::new(self.edges[e.index()].generator, e.is_reversed())
    }

    /// The edge leaving `v` with label `x`, if any.
    pub fn step(&self, v: usize, x: Letter) -> Option<EdgeId> {
        self.out[v * 2 * self.rank as usize + x.index()]
    }

    /// Oriented edges leaving `v`, ordered by label (a, A, b, B, ...) then edge index.
    pub fn outgoing(&self, v: usize) -> Vec<EdgeId> {
        let mut out: Vec<EdgeId> = (0..self.edges.len())
            .flat_map(|k| [EdgeId::new(k, false), EdgeId::new(k, true)])
            .filter(|&e| self.origin(e) == v)
            .collect();
        out.sort_by_key(|&e| (self.label(e), e));
        out.dedup();
        out
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().map(|e| (e.from == v) as usize + (e.to == v) as usize).sum()
    }

    pub fn is_folded(&self) -> bool {
        self.folded
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return false;
        }
        let mut adj = vec![Vec::new(); self.vertex_count];
        for e in &self.edges {
            adj[e.from].push(e.to);
            adj[e.to].push(e.from);
        }
        let mut seen = vec![false; self.vertex_count];
        let mut queue = VecDeque::from([self.base]);
        seen[self.base] = true;
        while let Some(v) = queue.pop_front() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Rank of the fundamental group of a connected graph.
    pub fn cyclomatic_rank(&self) -> usize {
        self.edges.len() + 1 - self.vertex_count
    }

    /// Every vertex has exactly one outgoing and one incoming edge per generator.
    pub fn is_cover(&self) -> bool {
        self.folded && self.edges.len() == self.rank as usize * self.vertex_count
    }

    /// Identify same-origin same-label edges until none remain.
    pub fn fold(&self) -> AGraph {
        self.fold_with_map().0
    }

    /// Fold, also returning the image of every original vertex.
    ///
    /// Folded vertices are numbered by the smallest original vertex they contain.
    pub fn fold_with_map(&self) -> (AGraph, Vec<usize>) {
        if self.folded {
            return (self.clone(), (0..self.vertex_count).collect());
        }
        let n = self.vertex_count;
        let width = 2 * self.rank as usize;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut v: usize) -> usize {
            while parent[v] != v {
                parent[v] = parent[parent[v]];
                v = parent[v];
            }
            v
        }
        let mut table: Vec<Option<usize>> = vec![None; n * width];
        let mut pending: Vec<(usize, usize)> = Vec::new();
        for e in &self.edges {
            let g = e.generator as usize - 1;
            for (v, slot, t) in [(e.from, 2 * g, e.to), (e.to, 2 * g + 1, e.from)] {
                match table[v * width + slot] {
                    None => table[v * width + slot] = Some(t),
                    Some(t0) => pending.push((t0, t)),
                }
            }
        }
        while let Some((a, b)) = pending.pop() {
            let (a, b) = (find(&mut parent, a), find(&mut parent, b));
            if a == b {
                continue;
            }
            let (keep, gone) = if a < b { (a, b) } else { (b, a) };
            parent[gone] = keep;
            for slot in 0..width {
                if let Some(t) = table[gone * width + slot] {
                    match table[keep * width + slot] {
                        None => table[keep * width + slot] = Some(t),
                        Some(t0) => pending.push((t0, t)),
                    }
                }
            }
        }
        let roots: Vec<usize> = (0..n).map(|v| find(&mut parent, v)).collect();
        let mut new_id = vec![usize::MAX; n];
        let mut count = 0;
        for v in 0..n {
            if roots[v] == v {
                new_id[v] = count;
                count += 1;
            }
        }
        let map: Vec<usize> = roots.iter().map(|&r| new_id[r]).collect();
        let mut edges = Vec::new();
        for v in 0..n {
            if roots[v] != v {
                continue;
            }
            for g in 0..self.rank as usize {
                if let Some(t) = table[v * width + 2 * g] {
                    edges.push(Edge { from: new_id[v], to: map[t], generator: g as u32 + 1 });
                }
            }
        }
        (AGraph::build(self.rank, count, map[self.base], edges), map)
    }

    /// Repeatedly delete non-base vertices of degree at most one.
    pub fn core(&self) -> AGraph {
        let n = self.vertex_count;
        let mut alive = vec![true; n];
        let mut edge_alive = vec![true; self.edges.len()];
        let mut degree: Vec<usize> = (0..n).map(|v| self.degree(v)).collect();
        let mut stack: Vec<usize> = (0..n).filter(|&v| v != self.base && degree[v] <= 1).collect();
        while let Some(v) = stack.pop() {
            if !alive[v] {
                continue;
            }
            alive[v] = false;
            for (k, e) in self.edges.iter().enumerate() {
                if edge_alive[k] && (e.from == v || e.to == v) {
                    edge_alive[k] = false;
                    let other = if e.from == v { e.to } else { e.from };
                    if other != v {
                        degree[other] -= 1;
                        if other != self.base && alive[other] && degree[other] <= 1 {
                            stack.push(other);
                        }
                    }
                }
            }
        }
        let mut new_id = vec![usize::MAX; n];
        let mut count = 0;
        for v in 0..n {
            if alive[v] {
                new_id[v] = count;
                count += 1;
            }
        }
        let edges = self
            .edges
            .iter()
            .zip(&edge_alive)
            .filter(|(_, &a)| a)
            .map(|(e, _)| Edge { from: new_id[e.from], to: new_id[e.to], generator: e.generator })
            .collect();
        AGraph::build(self.rank, count, new_id[self.base], edges)
    }

    /// Add edges (never vertices) until every vertex has full valence.
    ///
    /// For each generator the vertices lacking an outgoing edge are paired, in
    /// ascending order, with the vertices lacking an incoming edge. Existing
    /// edges keep their indices.
    pub fn complete_to_cover(&self) -> Result<AGraph> {
        if !self.folded {
            return invalid("cover completion needs a folded graph");
        }
        let mut edges = self.edges.clone();
        for g in 1..=self.rank {
            let x = Letter::new(g, false);
            let missing_out: Vec<usize> =
                (0..self.vertex_count).filter(|&v| self.step(v, x).is_none()).collect();
            let missing_in: Vec<usize> =
                (0..self.vertex_count).filter(|&v| self.step(v, x.inverse()).is_none()).collect();
            debug_assert_eq!(missing_out.len(), missing_in.len());
            for (&from, &to) in missing_out.iter().zip(&missing_in) {
                edges.push(Edge { from, to, generator: g });
            }
        }
        Ok(AGraph::build(self.rank, self.vertex_count, self.base, edges))
    }

    /// The path from `start` reading `letters`.
    pub fn trace(&self, start: usize, letters: &[Letter]) -> Result<EdgePath> {
        let mut v = start;
        let mut edges = Vec::with_capacity(letters.len());
        for (position, &x) in letters.iter().enumerate() {
            let e = self.step(v, x).ok_or(Error::NoSuchPath { position })?;
            edges.push(e);
            v = self.terminus(e);
        }
        Ok(EdgePath { start, edges })
    }

    /// Endpoint of the path reading `letters`, without materialising it.
    pub fn walk(&self, start: usize, letters: &[Letter]) -> Option<usize> {
        let mut v = start;
        for &x in letters {
            v = self.terminus(self.step(v, x)?);
        }
        Some(v)
    }

    /// A copy with vertices renamed by `perm` (old id -> new id) and edges
    /// listed by (new origin, generator).
    fn relabel(&self, perm: &[usize]) -> AGraph {
        let mut edges: Vec<Edge> = self
            .edges
            .iter()
            .map(|e| Edge { from: perm[e.from], to: perm[e.to], generator: e.generator })
            .collect();
        edges.sort_by_key(|e| (e.from, e.generator, e.to));
        AGraph::build(self.rank, self.vertex_count, perm[self.base], edges)
    }

    /// Vertex order from a breadth-first search at the base, labels in order a, A, b, B, ...
    fn bfs_order(&self) -> Vec<usize> {
        let mut perm = vec![usize::MAX; self.vertex_count];
        let mut queue = VecDeque::from([self.base]);
        perm[self.base] = 0;
        let mut next = 1;
        while let Some(v) = queue.pop_front() {
            for x in Letter::alphabet(self.rank) {
                if let Some(e) = self.step(v, x) {
                    let t = self.terminus(e);
                    if perm[t] == usize::MAX {
                        perm[t] = next;
                        next += 1;
                        queue.push_back(t);
                    }
                }
            }
        }
        perm
    }

    /// Representative of the based isomorphism class (folded connected graphs).
    pub fn canonical(&self) -> AGraph {
        self.relabel(&self.bfs_order())
    }

    /// A code that is equal for two folded connected graphs iff they are
    /// isomorphic by a base-preserving label-preserving map.
    pub fn canonical_code(&self) -> Vec<usize> {
        let perm = self.bfs_order();
        let mut inverse = vec![0; self.vertex_count];
        for (old, &new) in perm.iter().enumerate() {
            inverse[new] = old;
        }
        let mut code = Vec::with_capacity(1 + self.vertex_count * 2 * self.rank as usize);
        code.push(self.vertex_count);
        for &old in &inverse {
            for x in Letter::alphabet(self.rank) {
                code.push(self.step(old, x).map_or(usize::MAX, |e| perm[self.terminus(e)]));
            }
        }
        code
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph G {\n");
        for v in 0..self.vertex_count {
            let shape = if v == self.base { "doublecircle" } else { "circle" };
            let _ = writeln!(s, "  {v} [shape={shape}];");
        }
        for e in &self.edges {
            let _ = writeln!(s, "  {} -> {} [label=\"a{}\"];", e.from, e.to, e.generator);
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertices: (0..self.vertex_count).collect(),
            base: self.base,
            edges: self
                .edges
                .iter()
                .map(|e| EdgeJson { from: e.from, to: e.to, gen: e.generator, sign: 1 })
                .collect(),
        }
    }

    pub fn from_json(json: &GraphJson, rank: u32) -> Result<AGraph> {
        let mut ids = json.vertices.clone();
        ids.sort_unstable();
        ids.dedup();
        let position = |v: usize| -> Result<usize> {
            ids.binary_search(&v)
                .map_err(|_| Error::InvalidInput(format!("edge endpoint {v} is not a listed vertex")))
        };
        let mut edges = Vec::with_capacity(json.edges.len());
        for e in &json.edges {
            if e.gen == 0 {
                return invalid("generators are numbered from 1");
            }
            let x = match e.sign {
                1 => Letter::new(e.gen, false),
                -1 => Letter::new(e.gen, true),
                s => return invalid(format!("edge sign must be 1 or -1, got {s}")),
            };
            edges.push((position(e.from)?, position(e.to)?, x));
        }
        AGraph::from_labeled_edges(rank, ids.len(), position(json.base)?, &edges)
    }
}

impl Serialize for AGraph {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<usize>,
    pub base: usize,
    pub edges: Vec<EdgeJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub from: usize,
    pub to: usize,
    pub gen: u32,
    pub sign: i32,
}

/// A sequence of consecutive oriented edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgePath {
    pub start: usize,
    pub edges: Vec<EdgeId>,
}

impl EdgePath {
    pub fn empty(start: usize) -> EdgePath {
        EdgePath { start, edges: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn end(&self, g: &AGraph) -> usize {
        self.edges.last().map_or(self.start, |&e| g.terminus(e))
    }

    pub fn is_closed(&self, g: &AGraph) -> bool {
        self.end(g) == self.start
    }

    pub fn is_reduced(&self) -> bool {
        self.edges.windows(2).all(|p| p[1] != p[0].reverse())
    }

    pub fn labels(&self, g: &AGraph) -> Vec<Letter> {
        self.edges.iter().map(|&e| g.label(e)).collect()
    }

    /// The label, freely reduced.
    pub fn word(&self, g: &AGraph) -> Word {
        Word::free_reduce(&self.labels(g), g.rank()).expect("edge labels lie within the graph rank")
    }

    pub fn is_consecutive(&self, g: &AGraph) -> bool {
        let mut v = self.start;
        for &e in &self.edges {
            if g.origin(e) != v {
                return false;
            }
            v = g.terminus(e);
        }
        true
    }

    pub fn extend(&mut self, other: &[EdgeId]) {
        self.edges.extend_from_slice(other);
    }
}
