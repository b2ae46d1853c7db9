//! Whitehead automorphisms and the decision procedures built on them:
//! minimisation, primitivity, simplicity, Whitehead graphs and the length-3
//! factor test for filling.

use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::words::{cyclic_reduce, least_rotation, parse_letters, signed_permutations, CyclicWord, Letter, Word};

/// How a second-kind automorphism with multiplier `m` treats a generator `x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Action {
    /// `x -> x`
    Fix,
    /// `x -> x m`
    Right,
    /// `x -> m^-1 x`
    Left,
    /// `x -> m^-1 x m`
    Both,
}

const ACTIONS: [Action; 4] = [Action::Fix, Action::Right, Action::Left, Action::Both];

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum WhiteheadAut {
    /// Generator `i + 1` maps to `images[i]`.
    Permutation { images: Vec<Letter> },
    /// Fixes the multiplier; `actions[i]` says what happens to generator `i + 1`.
    Multiplier { multiplier: Letter, actions: Vec<Action> },
}

impl WhiteheadAut {
    pub fn identity(rank: u32) -> WhiteheadAut {
        WhiteheadAut::Permutation { images: (1..=rank).map(|g| Letter::new(g, false)).collect() }
    }

    /// The inner automorphism `x -> m^-1 x m`.
    pub fn conjugation(multiplier: Letter, rank: u32) -> WhiteheadAut {
        let actions = (1..=rank)
            .map(|g| if g == multiplier.generator() { Action::Fix } else { Action::Both })
            .collect();
        WhiteheadAut::Multiplier { multiplier, actions }
    }

    pub fn rank(&self) -> u32 {
        match self {
            WhiteheadAut::Permutation { images } => images.len() as u32,
            WhiteheadAut::Multiplier { actions, .. } => actions.len() as u32,
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            WhiteheadAut::Permutation { images } => {
                images.iter().enumerate().all(|(i, x)| *x == Letter::new(i as u32 + 1, false))
            }
            WhiteheadAut::Multiplier { actions, .. } => actions.iter().all(|&a| a == Action::Fix),
        }
    }

    pub fn inverse(&self) -> WhiteheadAut {
        match self {
            WhiteheadAut::Permutation { images } => {
                let mut inv = vec![Letter::new(1, false); images.len()];
                for (i, y) in images.iter().enumerate() {
                    inv[y.generator() as usize - 1] = Letter::new(i as u32 + 1, y.is_inverse());
                }
                WhiteheadAut::Permutation { images: inv }
            }
            WhiteheadAut::Multiplier { multiplier, actions } => {
                WhiteheadAut::Multiplier { multiplier: multiplier.inverse(), actions: actions.clone() }
            }
        }
    }

    fn push_image(&self, x: Letter, out: &mut Vec<Letter>) {
        let mut push = |y: Letter| {
            if out.last() == Some(&y.inverse()) {
                out.pop();
            } else {
                out.push(y);
            }
        };
        let g = x.generator() as usize - 1;
        match self {
            WhiteheadAut::Permutation { images } => {
                push(if x.is_inverse() { images[g].inverse() } else { images[g] })
            }
            WhiteheadAut::Multiplier { multiplier: m, actions } => {
                let m = *m;
                if x.generator() == m.generator() {
                    push(x);
                    return;
                }
                let (pre, post) = match actions[g] {
                    Action::Fix => (false, false),
                    Action::Right => (false, true),
                    Action::Left => (true, false),
                    Action::Both => (true, true),
                };
                // image of x^-1 is the inverse of the image of x
                let (pre, post) = if x.is_inverse() { (post, pre) } else { (pre, post) };
                if pre {
                    push(m.inverse());
                }
                push(x);
                if post {
                    push(m);
                }
            }
        }
    }

    fn image_letters(&self, letters: &[Letter]) -> Vec<Letter> {
        let mut out = Vec::with_capacity(letters.len() + 4);
        for &x in letters {
            self.push_image(x, &mut out);
        }
        out
    }

    /// The freely reduced image of `w`.
    pub fn apply(&self, w: &Word) -> Word {
        Word::free_reduce(&self.image_letters(w.letters()), w.rank()).expect("automorphisms preserve rank")
    }

    /// The cyclically reduced image of a cyclic word.
    pub fn apply_cyclic(&self, w: &CyclicWord) -> CyclicWord {
        let letters = self.image_letters(w.letters());
        CyclicWord::from_word(&Word::free_reduce(&letters, w.rank()).expect("automorphisms preserve rank"))
    }

    fn cyclic_length_of_image(&self, letters: &[Letter]) -> usize {
        let img = self.image_letters(letters);
        let n = img.len();
        let mut k = 0;
        while 2 * k + 1 < n && img[k] == img[n - 1 - k].inverse() {
            k += 1;
        }
        n - 2 * k
    }
}

#[derive(Serialize, Deserialize)]
struct AutJson {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    multiplier: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    actions: Option<Vec<Action>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    permutation: Option<Vec<String>>,
}

impl Serialize for WhiteheadAut {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rank = self.rank();
        let json = match self {
            WhiteheadAut::Permutation { images } => AutJson {
                kind: "first".into(),
                multiplier: None,
                actions: None,
                permutation: Some(images.iter().map(|x| crate::words::spell(&[*x], rank)).collect()),
            },
            WhiteheadAut::Multiplier { multiplier, actions } => AutJson {
                kind: "second".into(),
                multiplier: Some(crate::words::spell(&[*multiplier], rank)),
                actions: Some(actions.clone()),
                permutation: None,
            },
        };
        json.serialize(s)
    }
}

fn single_letter(text: &str) -> std::result::Result<Letter, String> {
    match parse_letters(text).map_err(|e| e.to_string())?.as_slice() {
        [x] => Ok(*x),
        _ => Err(format!("expected a single letter, got {text:?}")),
    }
}

impl<'de> Deserialize<'de> for WhiteheadAut {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let json = AutJson::deserialize(d)?;
        let aut = match json.kind.as_str() {
            "first" => {
                let images = json
                    .permutation
                    .ok_or_else(|| D::Error::missing_field("permutation"))?
                    .iter()
                    .map(|t| single_letter(t))
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(D::Error::custom)?;
                let mut gens: Vec<u32> = images.iter().map(|x| x.generator()).collect();
                gens.sort_unstable();
                if gens != (1..=images.len() as u32).collect::<Vec<_>>() {
                    return Err(D::Error::custom("permutation must send generators to a signed basis"));
                }
                WhiteheadAut::Permutation { images }
            }
            "second" => {
                let multiplier = single_letter(&json.multiplier.ok_or_else(|| D::Error::missing_field("multiplier"))?)
                    .map_err(D::Error::custom)?;
                let actions = json.actions.ok_or_else(|| D::Error::missing_field("actions"))?;
                if multiplier.generator() as usize > actions.len() {
                    return Err(D::Error::custom("multiplier outside the rank given by actions"));
                }
                WhiteheadAut::Multiplier { multiplier, actions }
            }
            other => return Err(D::Error::custom(format!("unknown automorphism kind {other:?}"))),
        };
        Ok(aut)
    }
}

/// Second-kind automorphisms other than the identity: multipliers in
/// alphabet order, then action assignments in lexicographic order
/// (fix < right < left < both, lowest generator most significant).
pub fn second_kind(rank: u32) -> impl Iterator<Item = WhiteheadAut> {
    let r = rank as usize;
    Letter::alphabet(rank).flat_map(move |m| {
        let others = r - 1;
        (1..4u64.pow(others as u32)).map(move |code| {
            let mut actions = vec![Action::Fix; r];
            let mut c = code;
            let slots: Vec<usize> = (0..r).filter(|&g| g != m.generator() as usize - 1).collect();
            for &g in slots.iter().rev() {
                actions[g] = ACTIONS[(c % 4) as usize];
                c /= 4;
            }
            WhiteheadAut::Multiplier { multiplier: m, actions }
        })
    })
}

/// Generators of the first-kind group: transpositions of two generators and
/// inversions of a single generator.
pub fn first_kind_generators(rank: u32) -> Vec<WhiteheadAut> {
    let id: Vec<Letter> = (1..=rank).map(|g| Letter::new(g, false)).collect();
    let mut out = Vec::new();
    for i in 0..rank as usize {
        for j in i + 1..rank as usize {
            let mut images = id.clone();
            images.swap(i, j);
            out.push(WhiteheadAut::Permutation { images });
        }
    }
    for i in 0..rank as usize {
        let mut images = id.clone();
        images[i] = images[i].inverse();
        out.push(WhiteheadAut::Permutation { images });
    }
    out
}

/// The identity, every non-identity second-kind automorphism, then the
/// first-kind generators.
pub fn enumerate_whitehead(rank: u32) -> Vec<WhiteheadAut> {
    let mut out = vec![WhiteheadAut::identity(rank)];
    out.extend(second_kind(rank));
    out.extend(first_kind_generators(rank));
    out
}

pub fn apply(t: &WhiteheadAut, w: &Word) -> Word {
    t.apply(w)
}

/// A Whitehead-minimal cyclic word and automorphisms carrying the input to it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Minimization {
    pub minimal: CyclicWord,
    pub trace: Vec<WhiteheadAut>,
}

impl Minimization {
    /// Apply the trace to `w` in order.
    pub fn replay(trace: &[WhiteheadAut], w: &Word) -> Word {
        trace.iter().fold(w.clone(), |acc, t| t.apply(&acc))
    }
}

fn peel(cur: &mut Word, trace: &mut Vec<WhiteheadAut>) {
    while !cur.is_cyclically_reduced() {
        let t = WhiteheadAut::conjugation(cur.letters()[0], cur.rank());
        *cur = t.apply(cur);
        trace.push(t);
    }
}

/// Greedy descent: conjugate away the prefix, then repeatedly apply the first
/// second-kind automorphism (in [`second_kind`] order) that shortens the
/// cyclic length. Replaying the trace on `w` yields exactly `minimal`.
pub fn minimize(w: &Word) -> Result<Minimization> {
    if w.is_empty() {
        return invalid("the trivial word has no minimal form");
    }
    let mut cur = w.clone();
    let mut trace = Vec::new();
    peel(&mut cur, &mut trace);
    loop {
        let len = cur.len();
        let Some(t) = second_kind(cur.rank()).find(|t| t.cyclic_length_of_image(cur.letters()) < len) else {
            break;
        };
        cur = t.apply(&cur);
        trace.push(t);
        peel(&mut cur, &mut trace);
    }
    Ok(Minimization { minimal: CyclicWord::from_word(&cur), trace })
}

/// Whether no single Whitehead automorphism shortens `w`.
pub fn is_whitehead_minimal(w: &CyclicWord) -> bool {
    second_kind(w.rank()).all(|t| t.cyclic_length_of_image(w.letters()) >= w.len())
}

fn exponent_sums(w: &CyclicWord) -> Vec<i64> {
    let mut sums = vec![0i64; w.rank() as usize];
    for x in w.letters() {
        sums[x.generator() as usize - 1] += if x.is_inverse() { -1 } else { 1 };
    }
    sums
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

/// Relabel the generators occurring in `w` as `1..=s`.
fn restrict_to_support(w: &CyclicWord) -> CyclicWord {
    let support = w.to_word().support();
    let mut images = vec![Letter::new(1, false); w.rank() as usize];
    for (i, &g) in support.iter().enumerate() {
        images[g as usize - 1] = Letter::new(i as u32 + 1, false);
    }
    let relabelled = w.relabel(&images);
    relabelled.with_rank(support.len().max(1) as u32).expect("support fits")
}

fn has_lonely_generator(w: &CyclicWord) -> bool {
    let mut count = vec![0usize; w.rank() as usize];
    for x in w.letters() {
        count[x.generator() as usize - 1] += 1;
    }
    count.contains(&1)
}

fn core_of(w: &Word) -> Result<CyclicWord> {
    let (_, c) = cyclic_reduce(w);
    if c.is_empty() {
        return invalid("the trivial word is neither primitive nor simple");
    }
    Ok(c)
}

/// Whether `w` belongs to a free basis.
pub fn is_primitive(w: &Word) -> Result<bool> {
    let c = core_of(w)?;
    if c.len() == 1 {
        return Ok(true);
    }
    if c.rank() == 1 || exponent_sums(&c).into_iter().fold(0, gcd) != 1 {
        return Ok(false);
    }
    let c = restrict_to_support(&c);
    if has_lonely_generator(&c) {
        return Ok(true);
    }
    if !has_cut_vertex(&whitehead_graph(&c)?) {
        return Ok(false);
    }
    Ok(minimize(&c.to_word())?.minimal.len() == 1)
}

/// Whether `w` lies in a proper free factor.
pub fn is_simple(w: &Word) -> Result<bool> {
    let c = core_of(w)?;
    if c.rank() == 1 {
        return Ok(false);
    }
    if c.len() == 1 || (c.to_word().support().len() as u32) < c.rank() || has_lonely_generator(&c) {
        return Ok(true);
    }
    if rauzy3_full(&c)? || !has_cut_vertex(&whitehead_graph(&c)?) {
        return Ok(false);
    }
    let minimal = minimize(&c.to_word())?.minimal;
    Ok((minimal.to_word().support().len() as u32) < c.rank())
}

/// Undirected simple graph on the `2 * rank` letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WhiteheadGraph {
    pub rank: u32,
    /// Pairs of letter indices, smaller first.
    pub edges: BTreeSet<(usize, usize)>,
}

impl WhiteheadGraph {
    pub fn vertex_count(&self) -> usize {
        2 * self.rank as usize
    }

    pub fn has_edge(&self, x: Letter, y: Letter) -> bool {
        let (a, b) = (x.index().min(y.index()), x.index().max(y.index()));
        self.edges.contains(&(a, b))
    }
}

impl Serialize for WhiteheadGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let name = |i: usize| crate::words::spell(&[Letter::from_index(i)], self.rank);
        let pairs: Vec<(String, String)> = self.edges.iter().map(|&(a, b)| (name(a), name(b))).collect();
        pairs.serialize(s)
    }
}

/// Edge `{x^-1, y}` for every cyclic two-letter factor `xy` of `w`.
pub fn whitehead_graph(w: &CyclicWord) -> Result<WhiteheadGraph> {
    if w.is_empty() {
        return invalid("the Whitehead graph of the empty word is undefined");
    }
    let n = w.len();
    let mut edges = BTreeSet::new();
    for i in 0..n {
        let (x, y) = (w.letters()[i].inverse(), w.letters()[(i + 1) % n]);
        edges.insert((x.index().min(y.index()), x.index().max(y.index())));
    }
    Ok(WhiteheadGraph { rank: w.rank(), edges })
}

/// Whether deleting one vertex leaves more than one component. Letters that
/// touch no edge still count as components.
pub fn has_cut_vertex(g: &WhiteheadGraph) -> bool {
    let n = g.vertex_count();
    if n < 3 {
        return false;
    }
    (0..n).any(|removed| {
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut v: usize) -> usize {
            while parent[v] != v {
                parent[v] = parent[parent[v]];
                v = parent[v];
            }
            v
        }
        for &(a, b) in &g.edges {
            if a != removed && b != removed {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
        let roots: HashSet<usize> = (0..n).filter(|&v| v != removed).map(|v| find(&mut parent, v)).collect();
        roots.len() > 1
    })
}

/// Whether every reduced word of length 3 occurs in some rotation of `w` or
/// of its inverse. When it does, `w` is filling.
pub fn rauzy3_full(w: &CyclicWord) -> Result<bool> {
    if w.is_empty() {
        return invalid("the empty word has no factors");
    }
    let m = 2 * w.rank() as usize;
    if m < 4 || w.len() < 3 {
        return Ok(false);
    }
    let n = w.len();
    let needed = m * (m - 1) * (m - 1);
    let mut seen = vec![false; m * m * m];
    let mut found = 0;
    let mut mark = |a: Letter, b: Letter, c: Letter| {
        let k = (a.index() * m + b.index()) * m + c.index();
        if !seen[k] {
            seen[k] = true;
            found += 1;
        }
    };
    let l = w.letters();
    for i in 0..n {
        let (a, b, c) = (l[i], l[(i + 1) % n], l[(i + 2) % n]);
        mark(a, b, c);
        mark(c.inverse(), b.inverse(), a.inverse());
    }
    Ok(found == needed)
}

/// Independent minimal-length search: breadth-first closure of the cyclic
/// class of `w` under every signed permutation and every second-kind
/// automorphism, never exceeding the starting length. Returns the
/// lexicographically least shortest word found (as its least rotation).
pub fn orbit_min_oracle(w: &Word, max_states: usize) -> Result<CyclicWord> {
    let start = core_of(w)?;
    let rank = start.rank();
    let bound = start.len();
    let mut autos: Vec<WhiteheadAut> =
        signed_permutations(rank).into_iter().map(|images| WhiteheadAut::Permutation { images }).collect();
    autos.extend(second_kind(rank));
    let key = |c: &CyclicWord| least_rotation(c.letters());
    let mut seen: HashSet<Vec<Letter>> = HashSet::new();
    let mut best = key(&start);
    seen.insert(best.clone());
    let mut queue = VecDeque::from([best.clone()]);
    while let Some(letters) = queue.pop_front() {
        let c = CyclicWord::new(letters, rank)?;
        for t in &autos {
            let img = t.apply_cyclic(&c);
            if img.len() > bound {
                continue;
            }
            let k = key(&img);
            if seen.insert(k.clone()) {
                if seen.len() > max_states {
                    return Err(Error::ResourceGuard(format!("orbit search exceeded {max_states} states")));
                }
                if (k.len(), &k) < (best.len(), &best) {
                    best = k.clone();
                }
                queue.push_back(k);
            }
        }
    }
    CyclicWord::new(best, rank)
}
