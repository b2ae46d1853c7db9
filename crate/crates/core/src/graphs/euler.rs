//! Positive Euler circuits on covers and words whose traces cover every edge
//! from every starting vertex.

use super::{AGraph, EdgeId};
use crate::error::{invalid, Result};
use crate::words::{Letter, Word};

/// Hierholzer's algorithm on the positively oriented edges, from `start`.
pub(crate) fn euler_circuit(g: &AGraph, start: usize) -> Vec<EdgeId> {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); g.vertex_count()];
    for (k, e) in g.edges().iter().enumerate() {
        adj[e.from].push(k);
    }
    let mut next = vec![0; g.vertex_count()];
    let mut stack: Vec<(usize, Option<usize>)> = vec![(start, None)];
    let mut circuit = Vec::with_capacity(g.edge_count());
    while let Some(&(v, via)) = stack.last() {
        if next[v] < adj[v].len() {
            let k = adj[v][next[v]];
            next[v] += 1;
            stack.push((g.edges()[k].to, Some(k)));
        } else {
            stack.pop();
            if let Some(k) = via {
                circuit.push(EdgeId::new(k, false));
            }
        }
    }
    circuit.reverse();
    circuit
}

fn check_cover(g: &AGraph) -> Result<()> {
    if !g.is_cover() || !g.is_connected() {
        return invalid("expected a connected cover of the rose");
    }
    Ok(())
}

fn circuit_label(g: &AGraph, start: usize) -> Vec<Letter> {
    euler_circuit(g, start).into_iter().map(|e| g.label(e)).collect()
}

/// A positive word of length `rank * degree` labelling an Euler circuit at the base.
pub fn euler_word(g: &AGraph) -> Result<Word> {
    check_cover(g)?;
    Word::free_reduce(&circuit_label(g, g.base()), g.rank())
}

/// A positive word of length `rank * degree^2` whose trace from every vertex
/// passes through every edge.
///
/// Vertices are handled base first, then in ascending order: each step
/// appends an Euler circuit starting where the word so far leads the next
/// vertex.
pub fn barysh_word(g: &AGraph) -> Result<Word> {
    check_cover(g)?;
    let order = std::iter::once(g.base()).chain((0..g.vertex_count()).filter(|&v| v != g.base()));
    let mut letters: Vec<Letter> = Vec::with_capacity(g.edge_count() * g.vertex_count());
    for x in order {
        let y = g.walk(x, &letters).expect("covers trace every word");
        letters.extend(circuit_label(g, y));
    }
    Word::free_reduce(&letters, g.rank())
}

/// Whether the trace of `w` from `start` passes through every edge.
pub fn covers_all_edges(g: &AGraph, start: usize, w: &Word) -> bool {
    match g.trace(start, w.letters()) {
        Ok(p) => {
            let mut seen = vec![false; g.edge_count()];
            for e in p.edges {
                seen[e.index()] = true;
            }
            seen.into_iter().all(|s| s)
        }
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::enumerate_covers;

    #[test]
    fn roses() {
        assert_eq!(euler_word(&AGraph::rose(2)).unwrap().to_string(), "ab");
        assert_eq!(euler_word(&AGraph::rose(3)).unwrap().len(), 3);
        assert_eq!(barysh_word(&AGraph::rose(2)).unwrap().to_string(), "ab");
    }

    #[test]
    fn degree_two_covers() {
        for g in enumerate_covers(2, 2).unwrap() {
            let e = euler_word(&g).unwrap();
            assert_eq!(e.len(), 4);
            assert!(e.letters().iter().all(|x| !x.is_inverse()));
            assert!(covers_all_edges(&g, g.base(), &e));
            let v = barysh_word(&g).unwrap();
            assert_eq!(v.len(), 8);
            for x in 0..2 {
                assert!(covers_all_edges(&g, x, &v));
            }
        }
    }
}
