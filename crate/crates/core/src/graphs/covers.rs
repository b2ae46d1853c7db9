//! Based covers of the rose, i.e. finite-index subgroups.

use std::ops::ControlFlow;

use super::{AGraph, Edge};
use crate::error::{invalid, Result};

/// The cover with an edge `j -> sigma_i(j)` labelled by generator `i + 1`, based at 0.
pub fn cover_from_permutations(perms: &[Vec<usize>]) -> Result<AGraph> {
    let d = perms.first().map_or(0, |p| p.len());
    if d == 0 {
        return invalid("covers need at least one generator and one vertex");
    }
    let mut edges = Vec::with_capacity(d * perms.len());
    for (i, p) in perms.iter().enumerate() {
        let mut seen = vec![false; d];
        if p.len() != d || p.iter().any(|&j| j >= d || std::mem::replace(&mut seen[j], true)) {
            return invalid("every generator must act by a permutation of the same degree");
        }
        for (j, &t) in p.iter().enumerate() {
            edges.push(Edge { from: j, to: t, generator: i as u32 + 1 });
        }
    }
    AGraph::new(perms.len() as u32, d, 0, edges)
}

struct Sims<F> {
    rank: usize,
    degree: usize,
    // out[v][g], inn[v][g]
    out: Vec<Vec<Option<usize>>>,
    inn: Vec<Vec<Option<usize>>>,
    used: usize,
    visit: F,
    emitted: u64,
}

impl<F: FnMut(AGraph) -> ControlFlow<()>> Sims<F> {
    fn first_open_slot(&self) -> Option<(usize, usize, bool)> {
        for v in 0..self.used {
            for g in 0..self.rank {
                if self.out[v][g].is_none() {
                    return Some((v, g, false));
                }
                if self.inn[v][g].is_none() {
                    return Some((v, g, true));
                }
            }
        }
        None
    }

    fn search(&mut self) -> ControlFlow<()> {
        let Some((v, g, incoming)) = self.first_open_slot() else {
            if self.used == self.degree {
                self.emitted += 1;
                let mut edges = Vec::with_capacity(self.rank * self.degree);
                for j in 0..self.degree {
                    for g in 0..self.rank {
                        let to = self.out[j][g].expect("table is complete");
                        edges.push(Edge { from: j, to, generator: g as u32 + 1 });
                    }
                }
                return (self.visit)(AGraph::build(self.rank as u32, self.degree, 0, edges));
            }
            return ControlFlow::Continue(());
        };
        let limit = if self.used < self.degree { self.used + 1 } else { self.used };
        for t in 0..limit {
            let free = if incoming { self.out[t][g].is_none() } else { self.inn[t][g].is_none() };
            if !free {
                continue;
            }
            let fresh = t == self.used;
            if fresh {
                self.used += 1;
            }
            let (from, to) = if incoming { (t, v) } else { (v, t) };
            self.out[from][g] = Some(to);
            self.inn[to][g] = Some(from);
            let flow = self.search();
            self.out[from][g] = None;
            self.inn[to][g] = None;
            if fresh {
                self.used -= 1;
            }
            flow?;
        }
        ControlFlow::Continue(())
    }
}

/// Visit every based cover of exact degree `degree` once per based isomorphism
/// class. Vertices come numbered in breadth-first canonical order, so every
/// emitted graph equals its own canonical form. Returns the number visited.
pub fn for_each_cover<F>(rank: u32, degree: usize, visit: F) -> Result<u64>
where
    F: FnMut(AGraph) -> ControlFlow<()>,
{
    if rank == 0 || degree == 0 {
        return invalid("covers need rank and degree at least 1");
    }
    let (r, d) = (rank as usize, degree);
    let mut sims = Sims {
        rank: r,
        degree: d,
        out: vec![vec![None; r]; d],
        inn: vec![vec![None; r]; d],
        used: 1,
        visit,
        emitted: 0,
    };
    let _ = sims.search();
    Ok(sims.emitted)
}

/// All based covers of exact degree `degree`, one per based isomorphism class.
pub fn enumerate_covers(rank: u32, degree: usize) -> Result<Vec<AGraph>> {
    let mut out = Vec::new();
    for_each_cover(rank, degree, |g| {
        out.push(g);
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// The permutation of `0..d` with Lehmer code rank `idx`.
fn unrank_permutation(d: usize, mut idx: u64) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..d).collect();
    let mut out = Vec::with_capacity(d);
    for i in (0..d).rev() {
        let f = factorial(i);
        out.push(pool.remove((idx / f) as usize));
        idx %= f;
    }
    out
}

/// Covers from every transitive tuple of permutations, with repetitions:
/// a subgroup of index `d` appears `(d - 1)!` times.
#[derive(Clone, Debug)]
pub struct PermutationCovers {
    rank: u32,
    degree: usize,
    next: u64,
    end: u64,
}

impl PermutationCovers {
    pub fn total_tuples(&self) -> u64 {
        factorial(self.degree).pow(self.rank)
    }

    /// Restrict to the tuple index range `[start, end)`, for sharding.
    pub fn range(mut self, start: u64, end: u64) -> PermutationCovers {
        let total = self.total_tuples();
        self.end = end.min(total);
        self.next = start.min(self.end);
        self
    }

    fn tuple(&self, mut idx: u64) -> Vec<Vec<usize>> {
        let f = factorial(self.degree);
        let mut perms = Vec::with_capacity(self.rank as usize);
        for _ in 0..self.rank {
            perms.push(idx % f);
            idx /= f;
        }
        perms.reverse();
        perms.into_iter().map(|p| unrank_permutation(self.degree, p)).collect()
    }
}

impl Iterator for PermutationCovers {
    type Item = AGraph;

    fn next(&mut self) -> Option<AGraph> {
        while self.next < self.end {
            let perms = self.tuple(self.next);
            self.next += 1;
            let g = cover_from_permutations(&perms).expect("valid permutations");
            if g.is_connected() {
                return Some(g);
            }
        }
        None
    }
}

pub fn permutation_covers(rank: u32, degree: usize) -> Result<PermutationCovers> {
    if rank == 0 || degree == 0 {
        return invalid("covers need rank and degree at least 1");
    }
    let mut it = PermutationCovers { rank, degree, next: 0, end: 0 };
    it.end = it.total_tuples();
    Ok(it)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn subgroup_counts_rank_two() {
        let counts: Vec<usize> = (1..=4).map(|d| enumerate_covers(2, d).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 3, 13, 71]);
    }

    #[test]
    fn sims_output_is_canonical_and_distinct() {
        for d in 1..=4 {
            let covers = enumerate_covers(2, d).unwrap();
            let codes: HashSet<_> = covers.iter().map(|g| g.canonical_code()).collect();
            assert_eq!(codes.len(), covers.len());
            for g in &covers {
                assert!(g.is_cover());
                assert_eq!(g.canonical(), *g);
            }
        }
    }

    #[test]
    fn permutation_tuples_repeat_each_subgroup() {
        let all: Vec<AGraph> = permutation_covers(2, 3).unwrap().collect();
        assert_eq!(all.len(), 13 * 2);
        let shard: Vec<AGraph> = permutation_covers(2, 3).unwrap().range(10, 20).collect();
        assert!(shard.len() <= 10);
        assert_eq!(unrank_permutation(3, 5), vec![2, 1, 0]);
    }
}
