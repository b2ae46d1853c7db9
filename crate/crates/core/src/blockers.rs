//! Words that force a prescribed loop into their trace from every vertex of
//! a cover, and the witness words assembled from them.

use std::ops::ControlFlow;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor::contains_factor;
use crate::graphs::{
    alpha_path, barysh_word, beta_path, connector_path, covers_all_edges, for_each_cover, AGraph, EdgePath,
    SpanningData,
};
use crate::index::{Budget, FillCertificate};
use crate::whitehead::rauzy3_full;
use crate::words::{CyclicWord, Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlockerKind {
    AlphaBlocking,
    BetaForcing,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockerReport {
    pub kind: BlockerKind,
    pub degree: usize,
    pub rank: u32,
    pub cover: AGraph,
    pub tree: SpanningData,
    /// Label of the loop that every trace must contain.
    pub target: Word,
    pub word: Word,
    /// Lengths of the per-vertex pieces, base first.
    pub pieces: Vec<usize>,
    pub length_bound: u64,
    pub verified: bool,
}

/// Whether the trace of `w` from every vertex contains `target` as a subpath.
pub fn forces_everywhere(g: &AGraph, target: &EdgePath, w: &Word) -> bool {
    (0..g.vertex_count()).all(|x| {
        g.trace(x, w.letters()).is_ok_and(|p| contains_factor(&target.edges, &p.edges))
    })
}

fn vertex_order(g: &AGraph) -> impl Iterator<Item = usize> + '_ {
    std::iter::once(g.base()).chain((0..g.vertex_count()).filter(move |&v| v != g.base()))
}

/// Extend a word vertex by vertex (base first, then ascending) so that its
/// trace from each vertex runs through `target`: wherever the trace so far
/// ends, a shortest reduced connector leads into the target loop.
fn force(g: &AGraph, target: &EdgePath) -> Result<(Word, Vec<usize>)> {
    let mut letters: Vec<Letter> = Vec::new();
    let mut pieces = Vec::new();
    for x in vertex_order(g) {
        let before = letters.len();
        if letters.is_empty() {
            letters.extend(target.labels(g));
        } else {
            let p = g.trace(x, &letters)?;
            if !contains_factor(&target.edges, &p.edges) {
                let last = *p.edges.last().expect("nonempty word traces a nonempty path");
                let conn = connector_path(g, last, target.edges[0])?;
                letters.extend(conn.edges[1..].iter().map(|&e| g.label(e)));
                letters.extend(target.edges[1..].iter().map(|&e| g.label(e)));
            }
        }
        pieces.push(letters.len() - before);
    }
    Ok((Word::free_reduce(&letters, g.rank())?, pieces))
}

fn check_cover(g: &AGraph) -> Result<()> {
    if !g.is_cover() || !g.is_connected() || g.rank() < 2 {
        return Err(Error::InvalidInput("expected a connected cover of a rose of rank at least 2".into()));
    }
    Ok(())
}

fn report(g: &AGraph, kind: BlockerKind) -> Result<BlockerReport> {
    check_cover(g)?;
    let sd = SpanningData::new(g)?;
    let target = match kind {
        BlockerKind::AlphaBlocking => alpha_path(g, &sd)?,
        BlockerKind::BetaForcing => beta_path(g, &sd)?,
    };
    let (word, pieces) = force(g, &target)?;
    let (n, d) = (g.rank() as u64, g.vertex_count() as u64);
    let length_bound = match kind {
        BlockerKind::AlphaBlocking => (2 * n + 5) * d.pow(3),
        BlockerKind::BetaForcing => 1000 * n.pow(3) * d.pow(5),
    };
    let verified = forces_everywhere(g, &target, &word) && word.len() as u64 <= length_bound;
    Ok(BlockerReport {
        kind,
        degree: g.vertex_count(),
        rank: g.rank(),
        cover: g.clone(),
        tree: sd,
        target: target.word(g),
        word,
        pieces,
        length_bound,
        verified,
    })
}

/// A word whose trace from every vertex contains the loop `b_r^2 b_1^2 ... b_r^2`
/// of the dual basis. Any loop at the base containing it is not simple in the subgroup.
pub fn blocking_word(g: &AGraph) -> Result<BlockerReport> {
    report(g, BlockerKind::AlphaBlocking)
}

/// A word whose trace from every vertex contains the loop spelling every
/// length-3 dual word. Any loop at the base containing it is filling in the subgroup.
pub fn forcing_word(g: &AGraph) -> Result<BlockerReport> {
    report(g, BlockerKind::BetaForcing)
}

/// Every based cover of degree `1..=d`, in degree order.
pub fn cover_census(rank: u32, d: usize, budget: &Budget) -> Result<Vec<AGraph>> {
    let mut out = Vec::new();
    for k in 1..=d {
        let mut tripped = None;
        for_each_cover(rank, k, |g| {
            out.push(g);
            match budget.check_covers(out.len() as u64) {
                Ok(()) => ControlFlow::Continue(()),
                Err(e) => {
                    tripped = Some(e);
                    ControlFlow::Break(())
                }
            }
        })?;
        if let Some(e) = tripped {
            return Err(e);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditEntry {
    pub census_index: usize,
    pub degree: usize,
    pub contains_word: bool,
    pub certificate: Option<FillCertificate>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub degree: usize,
    pub rank: u32,
    pub census_size: usize,
    pub word: CyclicWord,
    pub length_bound: u64,
    pub audit: Vec<AuditEntry>,
    /// Every subgroup of index at most `degree` containing the word has a filling certificate.
    pub complete: bool,
}

fn separator(prev: Letter, next: Letter, rank: u32) -> Option<Letter> {
    if prev != next.inverse() {
        return None;
    }
    Letter::alphabet(rank).find(|&y| y != prev.inverse() && y != next.inverse())
}

/// `z_d = w_1 u_1 w_2 u_2 ... w_m u_m` over the forcing words of all covers of
/// degree at most `d`, with separators `u_i` (empty or one letter) keeping the
/// word reduced and cyclically reduced.
///
/// The audit traces `z_d` in every cover of the census; wherever it closes up
/// at the base, the rewritten loop must contain every length-3 dual word.
pub fn witness_word(d: usize, rank: u32, budget: &Budget) -> Result<WitnessReport> {
    if d == 0 {
        return Err(Error::InvalidInput("degree must be at least 1".into()));
    }
    let census = cover_census(rank, d, budget)?;
    let mut pieces = Vec::with_capacity(census.len());
    for g in &census {
        budget.check_time()?;
        pieces.push(forcing_word(g)?.word);
    }
    let m = pieces.len();
    let mut letters: Vec<Letter> = Vec::new();
    for (j, w) in pieces.iter().enumerate() {
        letters.extend_from_slice(w.letters());
        let next = pieces[(j + 1) % m].letters()[0];
        if let Some(y) = separator(*w.letters().last().expect("forcing words are nonempty"), next, rank) {
            letters.push(y);
        }
    }
    let z = CyclicWord::new(letters, rank)?;
    let mut audit = Vec::with_capacity(m);
    for (i, g) in census.iter().enumerate() {
        let p = g.trace(g.base(), z.letters())?;
        let contains_word = p.is_closed(g);
        let certificate = if contains_word {
            let sd = SpanningData::new(g)?;
            Some(if rauzy3_full(&sd.rewrite_loop_cyclic(g, &p)?)? {
                FillCertificate::Rauzy3Filling
            } else {
                FillCertificate::Undetermined
            })
        } else {
            None
        };
        audit.push(AuditEntry { census_index: i, degree: g.vertex_count(), contains_word, certificate });
    }
    let complete = audit.iter().all(|a| !a.contains_word || a.certificate == Some(FillCertificate::Rauzy3Filling));
    let (n, dd) = (rank as u64, d as u64);
    Ok(WitnessReport {
        degree: d,
        rank,
        census_size: m,
        word: z,
        length_bound: m as u64 * (1000 * n.pow(3) * dd.pow(5) + 1),
        audit,
        complete,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BaryshEntry {
    pub cover: AGraph,
    pub word: Word,
    pub covers_from_every_vertex: bool,
}

/// For every cover of degree `d`, the edge-covering word and its check.
pub fn barysh_demo(d: usize, rank: u32, budget: &Budget) -> Result<Vec<BaryshEntry>> {
    let mut covers = Vec::new();
    let mut tripped = None;
    for_each_cover(rank, d, |g| {
        covers.push(g);
        match budget.check_covers(covers.len() as u64) {
            Ok(()) => ControlFlow::Continue(()),
            Err(e) => {
                tripped = Some(e);
                ControlFlow::Break(())
            }
        }
    })?;
    if let Some(e) = tripped {
        return Err(e);
    }
    covers
        .into_iter()
        .map(|g| {
            let word = barysh_word(&g)?;
            let ok = (0..g.vertex_count()).all(|x| covers_all_edges(&g, x, &word));
            Ok(BaryshEntry { cover: g, word, covers_from_every_vertex: ok })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::enumerate_covers;

    #[test]
    fn rose_blocking_word() {
        let r = blocking_word(&AGraph::rose(2)).unwrap();
        assert_eq!(r.word.to_string(), "bbaabb");
        assert!(r.verified && r.word.len() <= 9);
        let empty = Word::empty(2);
        let sd = SpanningData::new(&AGraph::rose(2)).unwrap();
        let alpha = alpha_path(&AGraph::rose(2), &sd).unwrap();
        assert!(!forces_everywhere(&AGraph::rose(2), &alpha, &empty));
    }

    #[test]
    fn degree_two_blockers() {
        for g in enumerate_covers(2, 2).unwrap() {
            let v = blocking_word(&g).unwrap();
            assert!(v.verified && v.word.len() <= 72);
            let w = forcing_word(&g).unwrap();
            assert!(w.verified);
            for &piece in &w.pieces {
                assert!(piece as u64 <= 500 * 16 * 8 + 6);
            }
        }
    }

    #[test]
    fn witness_for_degree_one() {
        let r = witness_word(1, 2, &Budget::unlimited()).unwrap();
        assert_eq!(r.census_size, 1);
        assert!(r.complete);
        assert!(rauzy3_full(&r.word).unwrap());
        assert!(r.word.len() as u64 <= r.length_bound);
    }

    #[test]
    fn census_guard() {
        let b = Budget { max_covers: Some(3), ..Budget::default() };
        assert!(matches!(witness_word(2, 2, &b), Err(Error::ResourceGuard(_))));
    }
}
