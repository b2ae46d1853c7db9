//! Words in a free group of finite rank.
//!
//! Generators are numbered `1..=rank`. The text syntax writes `a..z` for the
//! first 26 generators and `A..Z` for their inverses; words over a rank above
//! 26 are written with `x<k>` / `X<k>` tokens (e.g. `x3X12`).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{invalid, Result};
use crate::factor;

/// A generator or the inverse of a generator.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Letter(i32);

impl Letter {
    pub fn new(generator: u32, inverse: bool) -> Letter {
        assert!(generator >= 1, "generators are numbered from 1");
        let g = generator as i32;
        Letter(if inverse { -g } else { g })
    }

    /// The letter at position `i` of the alphabet order a, A, b, B, ...
    pub fn from_index(i: usize) -> Letter {
        Letter::new((i / 2) as u32 + 1, i % 2 == 1)
    }

    pub fn generator(self) -> u32 {
        self.0.unsigned_abs()
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }

    /// Position in the alphabet order a, A, b, B, ...
    pub fn index(self) -> usize {
        2 * (self.generator() as usize - 1) + self.is_inverse() as usize
    }

    /// All `2 * rank` letters in alphabet order.
    pub fn alphabet(rank: u32) -> impl Iterator<Item = Letter> {
        (0..2 * rank as usize).map(Letter::from_index)
    }

    fn write_token(self, f: &mut fmt::Formatter<'_>, tokens: bool) -> fmt::Result {
        let g = self.generator();
        if tokens || g > 26 {
            write!(f, "{}{}", if self.is_inverse() { 'X' } else { 'x' }, g)
        } else {
            let c = (b'a' + (g - 1) as u8) as char;
            let c = if self.is_inverse() { c.to_ascii_uppercase() } else { c };
            write!(f, "{c}")
        }
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.index().cmp(&other.index())
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_token(f, false)
    }
}

struct Spelled<'a>(&'a [Letter], u32);

impl fmt::Display for Spelled<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tokens = self.1 > 26;
        for x in self.0 {
            x.write_token(f, tokens)?;
        }
        Ok(())
    }
}

/// Render letters in the text syntax appropriate for `rank`.
pub fn spell(letters: &[Letter], rank: u32) -> String {
    Spelled(letters, rank).to_string()
}

/// Parse the text syntax into raw (not necessarily reduced) letters.
///
/// `1`, `e` and the empty string denote the empty word; whitespace is ignored.
pub fn parse_letters(text: &str) -> Result<Vec<Letter>> {
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.len() == 1 && chars[0] == '1' {
        return Ok(Vec::new());
    }
    let mut out = Vec::with_capacity(chars.len());
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if !c.is_ascii_alphabetic() {
            return invalid(format!("unexpected character {c:?} in word {text:?}"));
        }
        let inverse = c.is_ascii_uppercase();
        if (c == 'x' || c == 'X') && i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
            let mut j = i + 1;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let digits: String = chars[i + 1..j].iter().collect();
            let g: u32 = digits
                .parse()
                .map_err(|_| crate::Error::InvalidInput(format!("bad generator token x{digits}")))?;
            if g == 0 {
                return invalid("generator tokens start at x1");
            }
            out.push(Letter::new(g, inverse));
            i = j;
        } else {
            let g = (c.to_ascii_lowercase() as u8 - b'a') as u32 + 1;
            out.push(Letter::new(g, inverse));
            i += 1;
        }
    }
    Ok(out)
}

fn check_rank(letters: &[Letter], rank: u32) -> Result<()> {
    if rank == 0 {
        return invalid("rank must be at least 1");
    }
    if let Some(x) = letters.iter().find(|x| x.generator() > rank) {
        return invalid(format!("letter {x} is outside rank {rank}"));
    }
    Ok(())
}

fn reduce_into(stack: &mut Vec<Letter>, letters: impl IntoIterator<Item = Letter>) {
    for x in letters {
        if stack.last() == Some(&x.inverse()) {
            stack.pop();
        } else {
            stack.push(x);
        }
    }
}

/// A freely reduced word.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Word {
    letters: Vec<Letter>,
    rank: u32,
}

impl Word {
    pub fn empty(rank: u32) -> Word {
        Word { letters: Vec::new(), rank }
    }

    /// Freely reduce an arbitrary sequence of letters.
    pub fn free_reduce(raw: &[Letter], rank: u32) -> Result<Word> {
        check_rank(raw, rank)?;
        let mut letters = Vec::with_capacity(raw.len());
        reduce_into(&mut letters, raw.iter().copied());
        Ok(Word { letters, rank })
    }

    pub fn parse(text: &str, rank: u32) -> Result<Word> {
        Word::free_reduce(&parse_letters(text)?, rank)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|x| x.inverse()).collect(),
            rank: self.rank,
        }
    }

    /// The reduced product `self * other`.
    pub fn mul(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        reduce_into(&mut letters, other.letters.iter().copied());
        Word { letters, rank: self.rank.max(other.rank) }
    }

    pub fn pow(&self, k: usize) -> Word {
        let mut letters = Vec::with_capacity(self.len() * k);
        for _ in 0..k {
            reduce_into(&mut letters, self.letters.iter().copied());
        }
        Word { letters, rank: self.rank }
    }

    /// `c^{-1} * self * c`.
    pub fn conjugate(&self, c: &Word) -> Word {
        c.inverse().mul(self).mul(c)
    }

    /// `x y x^{-1} y^{-1}`.
    pub fn commutator(x: &Word, y: &Word) -> Word {
        x.mul(y).mul(&x.inverse()).mul(&y.inverse())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(&f), Some(&l)) => self.len() == 1 || f != l.inverse(),
            _ => true,
        }
    }

    /// The generators that occur in the word.
    pub fn support(&self) -> Vec<u32> {
        let mut gens: Vec<u32> = self.letters.iter().map(|x| x.generator()).collect();
        gens.sort_unstable();
        gens.dedup();
        gens
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        Spelled(&self.letters, self.rank).fmt(f)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A cyclically reduced word. Operations treat it as a fixed rotation unless
/// they say otherwise.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CyclicWord {
    letters: Vec<Letter>,
    rank: u32,
}

impl CyclicWord {
    pub fn new(letters: Vec<Letter>, rank: u32) -> Result<CyclicWord> {
        check_rank(&letters, rank)?;
        let w = Word { letters, rank };
        if w.letters.windows(2).any(|p| p[0] == p[1].inverse()) || !w.is_cyclically_reduced() {
            return invalid(format!("{w} is not cyclically reduced"));
        }
        Ok(CyclicWord { letters: w.letters, rank })
    }

    /// The cyclically reduced core of `w`.
    pub fn from_word(w: &Word) -> CyclicWord {
        cyclic_reduce(w).1
    }

    /// Parse, freely reduce and cyclically reduce.
    pub fn parse(text: &str, rank: u32) -> Result<CyclicWord> {
        Ok(CyclicWord::from_word(&Word::parse(text, rank)?))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn to_word(&self) -> Word {
        Word { letters: self.letters.clone(), rank: self.rank }
    }

    pub fn inverse(&self) -> CyclicWord {
        CyclicWord {
            letters: self.letters.iter().rev().map(|x| x.inverse()).collect(),
            rank: self.rank,
        }
    }

    pub fn rotate(&self, k: usize) -> CyclicWord {
        let mut letters = self.letters.clone();
        if !letters.is_empty() {
            letters.rotate_left(k % self.len());
        }
        CyclicWord { letters, rank: self.rank }
    }

    /// The lexicographically least rotation (alphabet order a < A < b < ...).
    pub fn least_rotation(&self) -> CyclicWord {
        CyclicWord { letters: least_rotation(&self.letters), rank: self.rank }
    }

    /// Equality up to rotation.
    pub fn same_cycle(&self, other: &CyclicWord) -> bool {
        self.len() == other.len() && least_rotation(&self.letters) == least_rotation(&other.letters)
    }

    /// Same rank, letters relabelled through `image_of_generator` (indexed by generator - 1).
    pub fn relabel(&self, image_of_generator: &[Letter]) -> CyclicWord {
        let letters = self
            .letters
            .iter()
            .map(|x| {
                let y = image_of_generator[x.generator() as usize - 1];
                if x.is_inverse() { y.inverse() } else { y }
            })
            .collect();
        CyclicWord { letters, rank: self.rank }
    }

    pub fn with_rank(mut self, rank: u32) -> Result<CyclicWord> {
        check_rank(&self.letters, rank)?;
        self.rank = rank;
        Ok(self)
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        Spelled(&self.letters, self.rank).fmt(f)
    }
}

impl Serialize for CyclicWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub(crate) fn least_rotation(letters: &[Letter]) -> Vec<Letter> {
    let n = letters.len();
    let mut best: Option<Vec<Letter>> = None;
    for k in 0..n.max(1) {
        let rot: Vec<Letter> = letters[k.min(n)..].iter().chain(&letters[..k.min(n)]).copied().collect();
        if best.as_ref().is_none_or(|b| rot < *b) {
            best = Some(rot);
        }
    }
    best.unwrap_or_default()
}

/// Split `w = c * core * c^{-1}` with `core` cyclically reduced and `c` maximal.
pub fn cyclic_reduce(w: &Word) -> (Word, CyclicWord) {
    let n = w.len();
    let mut k = 0;
    while 2 * k + 1 < n && w.letters[k] == w.letters[n - 1 - k].inverse() {
        k += 1;
    }
    (
        Word { letters: w.letters[..k].to_vec(), rank: w.rank },
        CyclicWord { letters: w.letters[k..n - k].to_vec(), rank: w.rank },
    )
}

/// `w = root^exponent` with the exponent maximal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerDecomposition {
    pub is_power: bool,
    pub root: CyclicWord,
    pub exponent: usize,
}

pub fn is_proper_power(w: &CyclicWord) -> Result<PowerDecomposition> {
    let n = w.len();
    if n == 0 {
        return invalid("the empty word has no root");
    }
    let period = (1..=n)
        .filter(|p| n.is_multiple_of(*p))
        .find(|&p| (0..n).all(|i| w.letters[i] == w.letters[(i + p) % n]))
        .unwrap_or(n);
    Ok(PowerDecomposition {
        is_power: period < n,
        root: CyclicWord { letters: w.letters[..period].to_vec(), rank: w.rank },
        exponent: n / period,
    })
}

/// Number of freely reduced words of length exactly `n` over rank `rank`.
pub fn sphere_size(n: usize, rank: u32) -> u64 {
    if n == 0 {
        return 1;
    }
    let m = 2 * rank as u64;
    m * (m - 1).pow(n as u32 - 1)
}

/// All freely reduced words of a fixed length, in lexicographic order.
///
/// The stream can be started at any offset, which is how enumeration is
/// sharded across workers.
#[derive(Clone, Debug)]
pub struct ReducedWords {
    n: usize,
    rank: u32,
    next: u64,
    end: u64,
}

impl ReducedWords {
    pub fn starting_at(mut self, offset: u64) -> ReducedWords {
        self.next = offset.min(self.end);
        self
    }

    pub fn ending_at(mut self, end: u64) -> ReducedWords {
        self.end = end.min(sphere_size(self.n, self.rank));
        self
    }

    pub fn total(&self) -> u64 {
        sphere_size(self.n, self.rank)
    }

    fn unrank(&self, mut idx: u64) -> Word {
        let m = 2 * self.rank as u64;
        let mut digits = vec![0u64; self.n];
        for i in (1..self.n).rev() {
            digits[i] = idx % (m - 1);
            idx /= m - 1;
        }
        digits[0] = idx;
        let mut letters: Vec<Letter> = Vec::with_capacity(self.n);
        for (i, &d) in digits.iter().enumerate() {
            let x = if i == 0 {
                Letter::from_index(d as usize)
            } else {
                let forbidden = letters[i - 1].inverse().index() as u64;
                Letter::from_index(if d >= forbidden { d + 1 } else { d } as usize)
            };
            letters.push(x);
        }
        Word { letters, rank: self.rank }
    }
}

impl Iterator for ReducedWords {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.next >= self.end {
            return None;
        }
        let w = self.unrank(self.next);
        self.next += 1;
        Some(w)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next) as usize;
        (left, Some(left))
    }
}

pub fn enumerate_reduced(n: usize, rank: u32) -> ReducedWords {
    let end = if n == 0 || rank == 0 { 0 } else { sphere_size(n, rank) };
    ReducedWords { n, rank, next: 0, end }
}

/// Every cyclically reduced word of length exactly `n`.
pub fn cyclically_reduced_words(n: usize, rank: u32) -> impl Iterator<Item = CyclicWord> {
    enumerate_reduced(n, rank)
        .filter(|w| w.is_cyclically_reduced())
        .map(|w| CyclicWord { letters: w.letters, rank: w.rank })
}

pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

/// Images of the generators under every signed permutation of the basis.
pub(crate) fn signed_permutations(rank: u32) -> Vec<Vec<Letter>> {
    let n = rank as usize;
    let mut out = Vec::new();
    for perm in permutations(n) {
        for signs in 0u32..(1 << n) {
            out.push(
                perm.iter()
                    .enumerate()
                    .map(|(i, &p)| Letter::new(p as u32 + 1, signs >> i & 1 == 1))
                    .collect(),
            );
        }
    }
    out
}

/// Representative of `w` up to rotation, inversion and signed relabelling of generators.
pub fn class_representative(w: &CyclicWord) -> CyclicWord {
    let mut best: Option<Vec<Letter>> = None;
    for images in signed_permutations(w.rank) {
        let v = w.relabel(&images);
        for cand in [least_rotation(&v.letters), least_rotation(&v.inverse().letters)] {
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    CyclicWord { letters: best.unwrap_or_default(), rank: w.rank }
}

/// One representative per class of root-free cyclically reduced words of
/// length exactly `n`, up to rotation, inversion and relabelling.
pub fn enumerate_index_candidates(n: usize, rank: u32) -> Vec<CyclicWord> {
    let relabelings = signed_permutations(rank);
    let mut out = Vec::new();
    for w in cyclically_reduced_words(n, rank) {
        if is_proper_power(&w).map(|p| p.is_power).unwrap_or(true) {
            continue;
        }
        let canonical = relabelings.iter().all(|images| {
            let v = w.relabel(images);
            least_rotation(&v.letters) >= w.letters && least_rotation(&v.inverse().letters) >= w.letters
        });
        if canonical {
            out.push(w);
        }
    }
    out
}

/// Candidates of every length from 1 to `n`.
pub fn enumerate_index_candidates_upto(n: usize, rank: u32) -> Vec<CyclicWord> {
    (1..=n).flat_map(|k| enumerate_index_candidates(k, rank)).collect()
}

/// Number of (possibly overlapping) occurrences of `sigma` in `w`.
pub fn subword_count(sigma: &Word, w: &Word) -> usize {
    factor::count_occurrences(sigma.letters(), w.letters())
}

/// Letter count, length of the conjugating prefix, and occurrence counts of query words.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WordStats {
    pub length: usize,
    pub iota_length: usize,
    pub subword_counts: BTreeMap<String, usize>,
}

impl WordStats {
    pub fn compute(w: &Word, queries: &[Word]) -> WordStats {
        let (iota, _) = cyclic_reduce(w);
        WordStats {
            length: w.len(),
            iota_length: iota.len(),
            subword_counts: queries.iter().map(|q| (q.to_string(), subword_count(q, w))).collect(),
        }
    }
}
