//! Shortest reduced paths between prescribed first and last edges.

use std::collections::VecDeque;

use super::{AGraph, EdgeId, EdgePath};
use crate::error::{Error, Result};

fn slot(e: EdgeId) -> usize {
    2 * e.index() + e.is_reversed() as usize
}

/// Breadth-first search over oriented edges where `e -> f` iff `f` may follow
/// `e` in a reduced path. With `strict`, at least one step is taken.
fn search(g: &AGraph, e1: EdgeId, e2: EdgeId, strict: bool) -> Option<Vec<EdgeId>> {
    if !strict && e1 == e2 {
        return Some(vec![e1]);
    }
    let outgoing: Vec<Vec<EdgeId>> = (0..g.vertex_count()).map(|v| g.outgoing(v)).collect();
    let mut prev: Vec<Option<EdgeId>> = vec![None; 2 * g.edge_count()];
    let mut seen = vec![false; 2 * g.edge_count()];
    let mut queue = VecDeque::from([e1]);
    while let Some(e) = queue.pop_front() {
        for &f in &outgoing[g.terminus(e)] {
            if f == e.reverse() || seen[slot(f)] {
                continue;
            }
            seen[slot(f)] = true;
            prev[slot(f)] = Some(e);
            if f == e2 {
                let mut path = vec![f];
                let mut cur = e;
                loop {
                    path.push(cur);
                    if cur == e1 && path.len() >= 2 {
                        break;
                    }
                    cur = prev[slot(cur)].expect("reached edges have a predecessor");
                }
                path.reverse();
                return Some(path);
            }
            queue.push_back(f);
        }
    }
    None
}

fn check(g: &AGraph) -> Result<()> {
    if g.cyclomatic_rank() < 2 {
        return Err(Error::Unsupported("connectors need a graph of rank at least 2".into()));
    }
    Ok(())
}

/// A shortest reduced path starting with `e1` and ending with `e2`.
///
/// On a finite core graph of rank at least 2 such a path exists and has at
/// most `3 * #V` edges; the length is reported, not truncated.
pub fn connector_path(g: &AGraph, e1: EdgeId, e2: EdgeId) -> Result<EdgePath> {
    check(g)?;
    let edges = search(g, e1, e2, false)
        .ok_or_else(|| Error::Unsupported("no reduced path joins the given edges".into()))?;
    Ok(EdgePath { start: g.origin(e1), edges })
}

/// Like [`connector_path`], but the path has at least two edges even when `e1 == e2`.
pub fn strict_connector_path(g: &AGraph, e1: EdgeId, e2: EdgeId) -> Result<EdgePath> {
    check(g)?;
    let edges = search(g, e1, e2, true)
        .ok_or_else(|| Error::Unsupported("no reduced path joins the given edges".into()))?;
    Ok(EdgePath { start: g.origin(e1), edges })
}
