//! End-to-end checks of the library against exact known values, independent
//! oracles and proven bounds. Shared by the `acceptance` test target and the
//! CLI `selftest` command.

use std::time::Instant;

use serde::Serialize;

use crate::blockers::{blocking_word, forces_everywhere, forcing_word, witness_word};
use crate::error::Result;
use crate::graphs::{alpha_path, beta_path, enumerate_covers, SpanningData};
use crate::index::{commutator_witness, d_prim, d_prim_census_oracle, divisibility, index_report, Bounded, Budget};
use crate::randomwalk::{pair_frequency_study, sample_word, WalkConfig};
use crate::whitehead::{has_cut_vertex, is_simple, minimize, orbit_min_oracle, whitehead_graph};
use crate::words::{cyclically_reduced_words, enumerate_reduced, is_proper_power, CyclicWord, Letter, Word};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionOutcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
    pub time_limit_seconds: Option<f64>,
}

fn timed(
    id: u32,
    name: &'static str,
    limit: Option<f64>,
    body: impl FnOnce() -> Result<(bool, String)>,
) -> CriterionOutcome {
    let start = Instant::now();
    let (ok, detail) = match body() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    let seconds = start.elapsed().as_secs_f64();
    let in_time = limit.is_none_or(|l| seconds < l);
    let detail = if in_time { detail } else { format!("{detail}; exceeded {:.0} s", limit.unwrap_or(0.0)) };
    CriterionOutcome { id, name, passed: ok && in_time, detail, seconds, time_limit_seconds: limit }
}

fn tally(total: usize, what: &str, problems: &[String], kind: &str) -> String {
    let mut s = format!("{total} {what}, {} {kind}", problems.len());
    if !problems.is_empty() {
        s.push_str(": ");
        s.push_str(&problems.join(", "));
    }
    s
}

fn root_free_words(max_len: usize, rank: u32) -> Vec<CyclicWord> {
    (1..=max_len)
        .flat_map(|n| cyclically_reduced_words(n, rank))
        .filter(|w| !is_proper_power(w).map(|p| p.is_power).unwrap_or(true))
        .collect()
}

/// Index of `a^n` equals `n`.
pub fn powers_of_generator() -> CriterionOutcome {
    timed(1, "power law for generator powers", Some(60.0), || {
        let mut failures = Vec::new();
        for (rank, max_n) in [(2u32, 6usize), (3, 4)] {
            for n in 1..=max_n {
                let w = CyclicWord::new(vec![Letter::new(1, false); n], rank)?;
                let (d, _) = d_prim(&w, &Budget::unlimited())?;
                if d != n {
                    failures.push(format!("rank {rank}: a^{n} gave {d}"));
                }
            }
        }
        Ok((failures.is_empty(), if failures.is_empty() { "10 of 10 exact".into() } else { failures.join(", ") }))
    })
}

/// `lower <= upper <= d_simp <= d_prim <= |w|` on all short root-free words.
pub fn index_chain() -> CriterionOutcome {
    timed(2, "index ordering on root-free words up to length 6", None, || {
        let words = root_free_words(6, 2);
        let mut violations = Vec::new();
        for w in &words {
            let r = index_report(w, &Budget::unlimited())?;
            let chain = [r.d_fill_lower, r.d_fill_upper, r.d_simp, r.d_prim, w.len()];
            if chain.windows(2).any(|p| p[0] > p[1]) {
                violations.push(format!("{w}: {chain:?}"));
            }
        }
        Ok((violations.is_empty(), tally(words.len(), "words", &violations, "violations")))
    })
}

/// Principal quotients and the cover census agree on `d_prim`.
pub fn census_agreement() -> CriterionOutcome {
    timed(3, "quotient search agrees with cover census up to length 5", Some(600.0), || {
        let words = root_free_words(5, 2);
        let mut mismatches = Vec::new();
        for w in &words {
            let (d, _) = d_prim(w, &Budget::unlimited())?;
            let census = d_prim_census_oracle(w, 5, &Budget::unlimited())?;
            if census != Bounded::Exact(d) {
                mismatches.push(format!("{w}: quotients {d}, census {census:?}"));
            }
        }
        Ok((mismatches.is_empty(), tally(words.len(), "words", &mismatches, "mismatches")))
    })
}

/// Greedy minimisation reaches the orbit minimum; simple words have a cut
/// vertex in the Whitehead graph of their minimal form.
pub fn whitehead_soundness() -> CriterionOutcome {
    timed(4, "Whitehead minimisation and cut vertices up to length 6", Some(300.0), || {
        let words: Vec<CyclicWord> = (1..=6).flat_map(|n| cyclically_reduced_words(n, 2)).collect();
        let mut failures = Vec::new();
        for w in &words {
            let word = w.to_word();
            let m = minimize(&word)?;
            let oracle = orbit_min_oracle(&word, 1_000_000)?;
            if m.minimal.len() != oracle.len() {
                failures.push(format!("{w}: greedy {} vs orbit {}", m.minimal.len(), oracle.len()));
            }
            if is_simple(&word)? && !has_cut_vertex(&whitehead_graph(&m.minimal)?) {
                failures.push(format!("{w}: simple without cut vertex"));
            }
        }
        Ok((failures.is_empty(), tally(words.len(), "words", &failures, "failures")))
    })
}

/// Blocking and forcing words work from every vertex within their bounds.
pub fn blocker_verification() -> CriterionOutcome {
    timed(5, "blocking and forcing words on covers of degree at most 3", Some(300.0), || {
        let mut checked = 0;
        let mut failures = Vec::new();
        for d in 1..=3usize {
            for g in enumerate_covers(2, d)? {
                checked += 1;
                let sd = SpanningData::new(&g)?;
                let (alpha, beta) = (alpha_path(&g, &sd)?, beta_path(&g, &sd)?);
                let v = blocking_word(&g)?;
                let w = forcing_word(&g)?;
                let v_ok = forces_everywhere(&g, &alpha, &v.word) && v.word.len() <= 9 * d.pow(3);
                let w_ok = forces_everywhere(&g, &beta, &w.word) && w.word.len() <= 8000 * d.pow(5);
                if !(v_ok && w_ok) {
                    failures.push(format!("degree {d} cover #{checked}: |v|={}, |w|={}", v.word.len(), w.word.len()));
                }
            }
        }
        Ok((failures.is_empty() && checked == 17, tally(checked, "covers", &failures, "failures")))
    })
}

/// Every subgroup of index at most `d` containing `z_d` certifies it filling.
pub fn witness_audits() -> CriterionOutcome {
    timed(6, "witness words z_1 and z_2 fully audited", None, || {
        let mut parts = Vec::new();
        let mut ok = true;
        for d in 1..=2 {
            let r = witness_word(d, 2, &Budget::unlimited())?;
            let containing = r.audit.iter().filter(|a| a.contains_word).count();
            ok &= r.complete && containing >= 1 && r.word.len() as u64 <= r.length_bound;
            parts.push(format!(
                "z_{d}: length {}, {} covers, {containing} containing, complete {}",
                r.word.len(),
                r.census_size,
                r.complete
            ));
        }
        Ok((ok, parts.join("; ")))
    })
}

/// Two-letter subword frequencies of random words match the stationary measure.
pub fn walk_statistics() -> CriterionOutcome {
    timed(7, "random walk pair frequencies and determinism", None, || {
        let report = pair_frequency_study(2, 10_000, 100_000, 1)?;
        let cfg = WalkConfig::new(2, 10_000, 42)?;
        let a = serde_json::to_vec(&sample_word(&cfg)?).expect("serialisable");
        let b = serde_json::to_vec(&sample_word(&cfg)?).expect("serialisable");
        let deterministic = a == b;
        Ok((
            report.max_z < 3.0 && deterministic,
            format!("max |z| = {:.3} over {} pairs; replay identical: {deterministic}", report.max_z, report.entries.len()),
        ))
    })
}

/// The commutator witness of `w` is never primitive below the divisibility of `w`.
pub fn commutator_witness_check() -> CriterionOutcome {
    timed(8, "commutator witnesses against divisibility for |w| <= 2", None, || {
        let words: Vec<Word> = (1..=2).flat_map(|n| enumerate_reduced(n, 2)).collect();
        let mut failures = Vec::new();
        for w in &words {
            let gamma = commutator_witness(w)?;
            let cyclic = CyclicWord::from_word(&gamma);
            let dw = match divisibility(w, 8, &Budget::unlimited())? {
                Bounded::Exact(v) => v,
                Bounded::Exceeds(c) => {
                    failures.push(format!("{w}: divisibility above {c}"));
                    continue;
                }
            };
            let below = d_prim_census_oracle(&cyclic, dw - 1, &Budget::unlimited())?;
            let shape_ok = gamma.len() <= 4 * w.len() + 4 && !is_proper_power(&cyclic)?.is_power;
            if below != Bounded::Exceeds(dw - 1) || !shape_ok {
                failures.push(format!("{w}: gamma {gamma}, D = {dw}, census below D {below:?}"));
            }
        }
        Ok((failures.is_empty(), tally(words.len(), "words", &failures, "failures")))
    })
}

pub fn run_all() -> Vec<CriterionOutcome> {
    vec![
        powers_of_generator(),
        index_chain(),
        census_agreement(),
        whitehead_soundness(),
        blocker_verification(),
        witness_audits(),
        walk_statistics(),
        commutator_witness_check(),
    ]
}
