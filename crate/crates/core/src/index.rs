//! Primitivity, simplicity and non-filling indexes.
//!
//! The exact values come from a best-first sweep over principal quotients of
//! the circle graph (smallest vertex count first). An independent census over
//! all covers up to a given degree serves as a cross-check.

use std::ops::ControlFlow;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::graphs::{circle_loop, for_each_cover, quotients_at_level, AGraph, SpanningData};
use crate::whitehead::{is_primitive, is_simple, rauzy3_full};
use crate::words::{enumerate_index_candidates, enumerate_reduced, CyclicWord, Letter, Word};

/// Limits on enumeration work. Exceeding any of them aborts with
/// [`Error::ResourceGuard`].
#[derive(Clone, Copy, Debug, Default)]
pub struct Budget {
    pub max_partitions: Option<u64>,
    pub max_covers: Option<u64>,
    pub deadline: Option<Instant>,
}

impl Budget {
    pub fn unlimited() -> Budget {
        Budget::default()
    }

    pub(crate) fn check_time(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() > d => Err(Error::ResourceGuard("time limit reached".into())),
            _ => Ok(()),
        }
    }

    fn check_partitions(&self, used: u64) -> Result<()> {
        match self.max_partitions {
            Some(m) if used > m => Err(Error::ResourceGuard(format!("more than {m} quotients needed"))),
            _ => Ok(()),
        }
    }

    pub(crate) fn check_covers(&self, used: u64) -> Result<()> {
        match self.max_covers {
            Some(m) if used > m => Err(Error::ResourceGuard(format!("more than {m} covers needed"))),
            _ => Ok(()),
        }
    }
}

/// A value known exactly, or known only to exceed a cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Bounded {
    Exact(usize),
    Exceeds(usize),
}

impl Bounded {
    pub fn exact(self) -> Option<usize> {
        match self {
            Bounded::Exact(v) => Some(v),
            Bounded::Exceeds(_) => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FillCertificate {
    /// The word lies in a proper free factor of the subgroup, hence is not filling there.
    SimpleInSubgroup,
    /// All length-3 factors occur in the rewritten word, hence it is filling.
    Rauzy3Filling,
    Undetermined,
}

/// A principal quotient together with the cover it completes to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub degree: usize,
    pub quotient: AGraph,
    pub cover: AGraph,
    pub quotient_is_cover: bool,
    /// The word's loop rewritten in the quotient's dual basis.
    pub rewritten: CyclicWord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FillBounds {
    pub lower: usize,
    pub upper: usize,
    pub exact: bool,
    pub upper_certificate: FillCertificate,
    pub lower_certificate: FillCertificate,
    pub upper_witness: Witness,
    pub lower_witness: Witness,
    /// Quotients below `lower`, each certified filling.
    pub rauzy3_certified_below: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexReport {
    pub word: CyclicWord,
    pub d_prim: usize,
    pub d_simp: usize,
    pub d_fill_lower: usize,
    pub d_fill_upper: usize,
    pub prim_witness: Witness,
    pub simp_witness: Witness,
    pub fill: FillBounds,
    pub quotients_examined: u64,
}

#[derive(Clone, Copy, Default)]
struct Wanted {
    prim: bool,
    simp: bool,
    fill: bool,
}

#[derive(Default)]
struct Found {
    prim: Option<(Vec<usize>, Witness)>,
    simp: Option<(Vec<usize>, Witness, FillCertificate)>,
    lower: Option<(Vec<usize>, Witness, FillCertificate)>,
    rauzy_below: u64,
    examined: u64,
    last_level: usize,
}

fn keep_least<T>(slot: &mut Option<(Vec<usize>, Witness, T)>, code: &[usize], w: &Witness, extra: T) {
    if slot.as_ref().is_none_or(|(c, _, _)| code < c.as_slice()) {
        *slot = Some((code.to_vec(), w.clone(), extra));
    }
}

/// Sweep principal quotients level by level until every wanted quantity is
/// found or `max_level` is passed. Within a level the witness with the least
/// canonical code wins.
fn sweep(w: &CyclicWord, wanted: Wanted, max_level: usize, budget: &Budget) -> Result<Found> {
    if w.is_empty() {
        return invalid("indexes are defined for nontrivial words only");
    }
    let mut found = Found::default();
    let word_loop = circle_loop(w);
    for k in 1..=max_level.min(w.len()) {
        found.last_level = k;
        let need_prim = wanted.prim && found.prim.is_none();
        let need_simp = wanted.simp && found.simp.is_none();
        let need_fill = wanted.fill && found.lower.is_none();
        if !(need_prim || need_simp || need_fill) {
            break;
        }
        let mut prim_here: Option<(Vec<usize>, Witness, ())> = None;
        let mut simp_here = None;
        let mut lower_here = None;
        let mut level_count = 0u64;
        let mut failure: Option<Error> = None;
        quotients_at_level(w, k, |q| {
            found.examined += 1;
            level_count += 1;
            let check = budget.check_partitions(found.examined).and_then(|_| {
                if found.examined % 1024 == 0 { budget.check_time() } else { Ok(()) }
            });
            if let Err(e) = check {
                failure = Some(e);
                return ControlFlow::Break(());
            }
            let outcome = (|| -> Result<()> {
                let g = &q.graph;
                let sd = SpanningData::new(g)?;
                let path = crate::graphs::EdgePath {
                    start: g.base(),
                    edges: word_loop
                        .edges
                        .iter()
                        .map(|&e| {
                            let i = e.index();
                            let x = w.letters()[i];
                            g.step(q.vertex_map[i], x).expect("quotient carries the word's loop")
                        })
                        .collect(),
                };
                let rewritten = sd.rewrite_loop_cyclic(g, &path)?;
                let is_cover = g.is_cover();
                let rw = rewritten.to_word();
                let witness = || -> Result<Witness> {
                    Ok(Witness {
                        degree: k,
                        quotient: g.clone(),
                        cover: g.complete_to_cover()?,
                        quotient_is_cover: is_cover,
                        rewritten: rewritten.clone(),
                    })
                };
                let mut primitive = None;
                if need_prim {
                    let p = is_primitive(&rw)?;
                    primitive = Some(p);
                    if p {
                        keep_least(&mut prim_here, &g.canonical_code(), &witness()?, ());
                    }
                }
                let mut simple = None;
                if need_simp || need_fill {
                    let s = !is_cover || primitive == Some(true) || is_simple(&rw)?;
                    simple = Some(s);
                    if s && need_simp {
                        keep_least(&mut simp_here, &g.canonical_code(), &witness()?, FillCertificate::SimpleInSubgroup);
                    }
                }
                if need_fill {
                    let certificate = if simple == Some(true) {
                        Some(FillCertificate::SimpleInSubgroup)
                    } else if rauzy3_full(&rewritten)? {
                        None
                    } else {
                        Some(FillCertificate::Undetermined)
                    };
                    if let Some(c) = certificate {
                        keep_least(&mut lower_here, &g.canonical_code(), &witness()?, c);
                    }
                }
                Ok(())
            })();
            match outcome {
                Ok(()) => ControlFlow::Continue(()),
                Err(e) => {
                    failure = Some(e);
                    ControlFlow::Break(())
                }
            }
        })?;
        if let Some(e) = failure {
            return Err(e);
        }
        if let Some((c, wit, ())) = prim_here {
            found.prim = Some((c, wit));
        }
        if simp_here.is_some() {
            found.simp = simp_here;
        }
        if lower_here.is_some() {
            found.lower = lower_here;
        } else if need_fill {
            found.rauzy_below += level_count;
        }
    }
    Ok(found)
}

fn require_nontrivial(w: &CyclicWord) -> Result<()> {
    if w.is_empty() {
        return invalid("indexes are defined for nontrivial words only");
    }
    Ok(())
}

/// Least index of a subgroup in which `w` is primitive.
pub fn d_prim(w: &CyclicWord, budget: &Budget) -> Result<(usize, Witness)> {
    require_nontrivial(w)?;
    let found = sweep(w, Wanted { prim: true, ..Wanted::default() }, w.len(), budget)?;
    let (_, wit) = found.prim.expect("the circle graph itself makes the word primitive");
    Ok((wit.degree, wit))
}

/// Least index of a subgroup in which `w` is simple.
pub fn d_simp(w: &CyclicWord, budget: &Budget) -> Result<(usize, Witness)> {
    require_nontrivial(w)?;
    let found = sweep(w, Wanted { simp: true, ..Wanted::default() }, w.len(), budget)?;
    let (_, wit, _) = found.simp.expect("the circle graph itself makes the word simple");
    Ok((wit.degree, wit))
}

/// `d_simp` if it is at most `cap`.
pub fn d_simp_capped(w: &CyclicWord, cap: usize, budget: &Budget) -> Result<Bounded> {
    require_nontrivial(w)?;
    let found = sweep(w, Wanted { simp: true, ..Wanted::default() }, cap, budget)?;
    Ok(match found.simp {
        Some((_, wit, _)) => Bounded::Exact(wit.degree),
        None => Bounded::Exceeds(cap),
    })
}

fn fill_bounds_from(found: &mut Found) -> FillBounds {
    let (_, upper_witness, _) = found.simp.clone().expect("simplicity level found");
    let (_, lower_witness, lower_certificate) = found.lower.clone().expect("fill lower level found");
    FillBounds {
        lower: lower_witness.degree,
        upper: upper_witness.degree,
        exact: lower_witness.degree == upper_witness.degree,
        upper_certificate: FillCertificate::SimpleInSubgroup,
        lower_certificate,
        upper_witness,
        lower_witness,
        rauzy3_certified_below: found.rauzy_below,
    }
}

/// Certified interval for the least index of a subgroup in which `w` is not filling.
///
/// The upper end is witnessed by a subgroup where `w` is simple. Every
/// quotient below the lower end rewrites `w` to a word containing all
/// length-3 factors, so `w` is filling in every subgroup of smaller index.
pub fn d_fill_bounds(w: &CyclicWord, budget: &Budget) -> Result<FillBounds> {
    require_nontrivial(w)?;
    let mut found = sweep(w, Wanted { simp: true, fill: true, ..Wanted::default() }, w.len(), budget)?;
    Ok(fill_bounds_from(&mut found))
}

pub fn index_report(w: &CyclicWord, budget: &Budget) -> Result<IndexReport> {
    require_nontrivial(w)?;
    let mut found = sweep(w, Wanted { prim: true, simp: true, fill: true }, w.len(), budget)?;
    let fill = fill_bounds_from(&mut found);
    let (_, prim_witness) = found.prim.clone().expect("primitivity level found");
    let (_, simp_witness, _) = found.simp.clone().expect("simplicity level found");
    Ok(IndexReport {
        word: w.clone(),
        d_prim: prim_witness.degree,
        d_simp: simp_witness.degree,
        d_fill_lower: fill.lower,
        d_fill_upper: fill.upper,
        prim_witness,
        simp_witness,
        fill,
        quotients_examined: found.examined,
    })
}

/// Visit covers of degree `1..=d_max` in order; stop at the first degree where
/// `hit` accepts some cover.
fn first_cover_degree(
    rank: u32,
    d_max: usize,
    budget: &Budget,
    mut hit: impl FnMut(&AGraph) -> Result<bool>,
) -> Result<Bounded> {
    let mut used = 0u64;
    for d in 1..=d_max {
        let mut outcome: Result<bool> = Ok(false);
        for_each_cover(rank, d, |g| {
            used += 1;
            let step = budget.check_covers(used).and_then(|_| {
                if used.is_multiple_of(256) { budget.check_time() } else { Ok(()) }
            });
            outcome = step.and_then(|_| hit(&g));
            match outcome {
                Ok(false) => ControlFlow::Continue(()),
                _ => ControlFlow::Break(()),
            }
        })?;
        if outcome? {
            return Ok(Bounded::Exact(d));
        }
    }
    Ok(Bounded::Exceeds(d_max))
}

/// Least degree of a cover in which `w` lies in the subgroup and is primitive
/// there, found by listing every cover up to `d_max`.
pub fn d_prim_census_oracle(w: &CyclicWord, d_max: usize, budget: &Budget) -> Result<Bounded> {
    require_nontrivial(w)?;
    first_cover_degree(w.rank(), d_max, budget, |g| {
        let p = g.trace(g.base(), w.letters())?;
        if !p.is_closed(g) {
            return Ok(false);
        }
        let sd = SpanningData::new(g)?;
        is_primitive(&sd.rewrite_loop_cyclic(g, &p)?.to_word())
    })
}

/// Least index of a subgroup avoiding `g`, if at most `d_max`.
pub fn divisibility(g: &Word, d_max: usize, budget: &Budget) -> Result<Bounded> {
    if g.is_empty() {
        return invalid("every subgroup contains the trivial word");
    }
    first_cover_degree(g.rank(), d_max, budget, |cover| {
        Ok(cover.walk(cover.base(), g.letters()) != Some(cover.base()))
    })
}

/// Largest divisibility over nontrivial words of length at most `n`.
pub fn rf_growth(n: usize, rank: u32, d_max: usize, budget: &Budget) -> Result<Bounded> {
    if n == 0 {
        return invalid("the ball must have positive radius");
    }
    let words: Vec<Word> = (1..=n).flat_map(|k| enumerate_reduced(k, rank)).collect();
    let values = words.par_iter().map(|w| divisibility(w, d_max, budget)).collect::<Result<Vec<_>>>()?;
    if values.iter().any(|v| matches!(v, Bounded::Exceeds(_))) {
        return Ok(Bounded::Exceeds(d_max));
    }
    Ok(Bounded::Exact(values.into_iter().filter_map(Bounded::exact).max().unwrap_or(0)))
}

/// `[w, w^a] = w (a^-1 w a) w^-1 (a^-1 w^-1 a)` with `a` the first generator,
/// or the second one when `w` is a power of the first.
pub fn commutator_witness(w: &Word) -> Result<Word> {
    if w.is_empty() {
        return invalid("the trivial word has no witness");
    }
    if w.rank() < 2 {
        return invalid("the witness needs rank at least 2");
    }
    let a1 = Letter::new(1, false);
    let generator = if w.letters().iter().all(|x| x.generator() == a1.generator()) { 2 } else { 1 };
    let a = Word::free_reduce(&[Letter::new(generator, false)], w.rank())?;
    Ok(Word::commutator(w, &w.conjugate(&a)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableEntry {
    pub n: usize,
    pub candidates: usize,
    pub f_prim: usize,
    pub f_prim_witness: CyclicWord,
    pub f_simp: usize,
    pub f_simp_witness: CyclicWord,
    pub f_fill_lower: usize,
    pub f_fill_upper: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexFunctionTable {
    pub rank: u32,
    pub entries: Vec<TableEntry>,
}

/// The index functions for lengths `1..=n_max`, as running maxima over
/// candidate classes of each exact length. Witnesses are the first extremal
/// word in candidate order.
pub fn f_table(n_max: usize, rank: u32, budget: &Budget) -> Result<IndexFunctionTable> {
    if n_max == 0 {
        return invalid("n_max must be at least 1");
    }
    let mut entries: Vec<TableEntry> = Vec::new();
    for n in 1..=n_max {
        budget.check_time()?;
        let candidates = enumerate_index_candidates(n, rank);
        let reports =
            candidates.par_iter().map(|c| index_report(c, budget)).collect::<Result<Vec<IndexReport>>>()?;
        let mut entry = match entries.last() {
            Some(prev) => TableEntry { n, candidates: candidates.len(), ..prev.clone() },
            None => {
                let first = &reports[0];
                TableEntry {
                    n,
                    candidates: candidates.len(),
                    f_prim: 0,
                    f_prim_witness: first.word.clone(),
                    f_simp: 0,
                    f_simp_witness: first.word.clone(),
                    f_fill_lower: 0,
                    f_fill_upper: 0,
                }
            }
        };
        for r in &reports {
            if r.d_prim > entry.f_prim {
                entry.f_prim = r.d_prim;
                entry.f_prim_witness = r.word.clone();
            }
            if r.d_simp > entry.f_simp {
                entry.f_simp = r.d_simp;
                entry.f_simp_witness = r.word.clone();
            }
            entry.f_fill_lower = entry.f_fill_lower.max(r.d_fill_lower);
            entry.f_fill_upper = entry.f_fill_upper.max(r.d_fill_upper);
        }
        entries.push(entry);
    }
    Ok(IndexFunctionTable { rank, entries })
}
