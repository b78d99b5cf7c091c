//! Commutator length of chains through pairings of letter occurrences.
//!
//! Positions of all terms are flattened into `0..L`. A pairing matches every
//! occurrence with an occurrence of the inverse letter; `σ` advances one
//! position cyclically inside each term. For a pairing `π` with `o` cycles of
//! `σ∘π` that links the `k` terms into `c` connected groups, the surface it
//! describes has total genus
//!
//! ```text
//! L/4 - o/2 + (2c - k)/2
//! ```
//!
//! and the commutator length of the chain is the minimum of this over all
//! pairings. For a single word, or whenever the pairing is connected
//! (`c = 1`), this is the familiar `L/4 - o/2 + (2 - k)/2` with `o` maximal.
//!
//! The search enumerates pairings depth-first, one positive occurrence at a
//! time, and prunes with the bound "every unassigned position contributes
//! at most one more cycle".

use std::sync::atomic::{AtomicBool, AtomicI64, Ordering};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::GenusError;
use crate::words::{Chain, Letter, Word};

/// Flattened positions of a list of terms together with the cyclic successor
/// map `σ`.
#[derive(Clone, Debug)]
pub struct IndexedChain {
    letters: Vec<Letter>,
    sigma: Vec<usize>,
    term_of: Vec<usize>,
    offsets: Vec<usize>,
}

impl IndexedChain {
    pub fn new(chain: &Chain) -> Self {
        Self::from_terms(chain.terms())
    }

    /// Indexes raw terms as given. Terms need not be reduced; empty terms
    /// are skipped.
    pub fn from_terms(terms: &[Word]) -> Self {
        let mut letters = Vec::new();
        let mut sigma = Vec::new();
        let mut term_of = Vec::new();
        let mut offsets = vec![0];
        for t in terms.iter().filter(|t| !t.is_empty()) {
            let start = letters.len();
            let k = offsets.len() - 1;
            for (i, &l) in t.letters().iter().enumerate() {
                letters.push(l);
                sigma.push(start + (i + 1) % t.len());
                term_of.push(k);
            }
            offsets.push(letters.len());
        }
        IndexedChain { letters, sigma, term_of, offsets }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn term_of(&self, position: usize) -> usize {
        self.term_of[position]
    }

    /// Position range of term `k`.
    pub fn term_range(&self, k: usize) -> std::ops::Range<usize> {
        self.offsets[k]..self.offsets[k + 1]
    }

    pub fn check_boundary(&self) -> Result<(), GenusError> {
        let mut sums = std::collections::BTreeMap::new();
        for l in &self.letters {
            *sums.entry(l.generator()).or_insert(0i64) += l.sign();
        }
        match sums.into_iter().find(|&(_, s)| s != 0) {
            Some((g, sum)) => Err(GenusError::NotBoundary { generator: g as char, sum }),
            None => Ok(()),
        }
    }
}

/// An involution on positions matching each letter with an inverse letter.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Pairing {
    map: Vec<usize>,
}

/// Why a proposed pairing or certificate was not accepted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RejectReason {
    WrongLength { expected: usize, found: usize },
    OutOfRange(usize),
    FixedPoint(usize),
    NotInvolution(usize),
    LetterMismatch(usize),
    NotBoundary,
    GenusExceeds { genus: u32, bound: u32 },
}

impl std::fmt::Display for RejectReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RejectReason::WrongLength { expected, found } => {
                write!(f, "pairing has length {found}, expected {expected}")
            }
            RejectReason::OutOfRange(i) => write!(f, "image of {i} is out of range"),
            RejectReason::FixedPoint(i) => write!(f, "{i} is a fixed point"),
            RejectReason::NotInvolution(i) => write!(f, "pairing is not an involution at {i}"),
            RejectReason::LetterMismatch(i) => {
                write!(f, "position {i} is not paired with an inverse letter")
            }
            RejectReason::NotBoundary => f.write_str("chain is not a boundary"),
            RejectReason::GenusExceeds { genus, bound } => {
                write!(f, "certified genus {genus} exceeds {bound}")
            }
        }
    }
}

impl Pairing {
    /// Wraps a raw map without checking it; see [`Pairing::validate`].
    pub fn from_vec(map: Vec<usize>) -> Self {
        Pairing { map }
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn partner(&self, position: usize) -> usize {
        self.map[position]
    }

    pub fn validate(&self, chain: &IndexedChain) -> Result<(), RejectReason> {
        let n = chain.len();
        if self.map.len() != n {
            return Err(RejectReason::WrongLength { expected: n, found: self.map.len() });
        }
        for (x, &y) in self.map.iter().enumerate() {
            if y >= n {
                return Err(RejectReason::OutOfRange(x));
            }
            if y == x {
                return Err(RejectReason::FixedPoint(x));
            }
            if self.map[y] != x {
                return Err(RejectReason::NotInvolution(x));
            }
            if !chain.letters[y].is_inverse_of(chain.letters[x]) {
                return Err(RejectReason::LetterMismatch(x));
            }
        }
        Ok(())
    }
}

/// Number of cycles of `x ↦ σ(π(x))`.
pub fn orbit_count(sigma: &[usize], pairing: &Pairing) -> usize {
    let n = sigma.len();
    let mut seen = vec![false; n];
    let mut cycles = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = sigma[pairing.partner(x)];
        }
    }
    cycles
}

/// Number of groups of terms linked together by the pairing.
pub fn component_count(chain: &IndexedChain, pairing: &Pairing) -> usize {
    let k = chain.term_count();
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut components = k;
    for x in 0..chain.len() {
        let a = find(&mut parent, chain.term_of(x));
        let b = find(&mut parent, chain.term_of(pairing.partner(x)));
        if a != b {
            parent[a] = b;
            components -= 1;
        }
    }
    components
}

/// `L/4 - o/2 + (2c - k)/2`, or `None` when that is not a nonnegative
/// integer.
pub fn genus_from_orbits(length: usize, orbits: usize, components: usize, terms: usize) -> Option<u32> {
    let numerator = length as i64 - 2 * orbits as i64 + 4 * components as i64 - 2 * terms as i64;
    if numerator < 0 || numerator % 4 != 0 {
        None
    } else {
        u32::try_from(numerator / 4).ok()
    }
}

/// A pairing together with the genus it certifies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusCertificate {
    pub pairing: Pairing,
    pub orbits: usize,
    pub genus: u32,
}

#[derive(Clone, Debug, Default)]
pub struct SearchOptions {
    /// Stop as soon as a pairing of genus at most this value is found.
    pub target_genus: Option<u32>,
    /// Fan the first level of the search out over the rayon pool.
    pub parallel: bool,
    /// Refuse inputs whose total length exceeds this.
    pub max_length: Option<usize>,
}

impl SearchOptions {
    pub fn parallel() -> Self {
        SearchOptions { parallel: true, ..Default::default() }
    }

    pub fn with_target(mut self, genus: u32) -> Self {
        self.target_genus = Some(genus);
        self
    }
}

/// Outcome of [`search`].
#[derive(Clone, Debug)]
pub struct SearchResult {
    pub witness: Pairing,
    pub orbits: usize,
    pub components: usize,
    pub genus: u32,
    /// Search tree nodes expanded.
    pub nodes: u64,
}

impl SearchResult {
    pub fn certificate(&self) -> GenusCertificate {
        GenusCertificate { pairing: self.witness.clone(), orbits: self.orbits, genus: self.genus }
    }
}

// Undo records for the incremental cycle and component structure.
enum ArcUndo {
    Closed,
    Merged { start: usize, end: usize, from: usize, to: usize },
}

struct UnionUndo {
    child: Option<usize>,
    root: usize,
    old_open: usize,
    completed: bool,
}

/// Depth-first pairing enumeration state.
struct Searcher<'a> {
    chain: &'a IndexedChain,
    positives: &'a [usize],
    candidates: &'a [Vec<usize>],
    terms: usize,
    partner: Vec<usize>,
    used: Vec<bool>,
    // path fragments of the partial map x ↦ σ(π(x)): head is valid at
    // fragment ends, tail at fragment starts
    head: Vec<usize>,
    tail: Vec<usize>,
    closed: usize,
    // union-find over terms, without path compression so it can be undone
    parent: Vec<usize>,
    size: Vec<usize>,
    open: Vec<usize>,
    components: usize,
    complete: usize,
    best_score: i64,
    best: Option<(usize, usize, Vec<usize>)>,
    nodes: u64,
}

const UNPAIRED: usize = usize::MAX;

impl<'a> Searcher<'a> {
    fn new(chain: &'a IndexedChain, positives: &'a [usize], candidates: &'a [Vec<usize>]) -> Self {
        let n = chain.len();
        let k = chain.term_count();
        Searcher {
            chain,
            positives,
            candidates,
            terms: k,
            partner: vec![UNPAIRED; n],
            used: vec![false; n],
            head: (0..n).collect(),
            tail: (0..n).collect(),
            closed: 0,
            parent: (0..k).collect(),
            size: vec![1; k],
            open: (0..k).map(|t| chain.term_range(t).len()).collect(),
            components: k,
            complete: 0,
            best_score: i64::MIN,
            best: None,
            nodes: 0,
        }
    }

    fn add_arc(&mut self, from: usize, to: usize) -> ArcUndo {
        let start = self.head[from];
        if start == to {
            self.closed += 1;
            ArcUndo::Closed
        } else {
            let end = self.tail[to];
            self.tail[start] = end;
            self.head[end] = start;
            ArcUndo::Merged { start, end, from, to }
        }
    }

    fn undo_arc(&mut self, undo: ArcUndo) {
        match undo {
            ArcUndo::Closed => self.closed -= 1,
            ArcUndo::Merged { start, end, from, to } => {
                self.tail[start] = from;
                self.head[end] = to;
            }
        }
    }

    fn find(&self, mut t: usize) -> usize {
        while self.parent[t] != t {
            t = self.parent[t];
        }
        t
    }

    fn union(&mut self, a: usize, b: usize) -> UnionUndo {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            let old_open = self.open[ra];
            self.open[ra] -= 2;
            let completed = self.open[ra] == 0;
            if completed {
                self.complete += 1;
            }
            return UnionUndo { child: None, root: ra, old_open, completed };
        }
        let (child, root) = if self.size[ra] < self.size[rb] { (ra, rb) } else { (rb, ra) };
        let old_open = self.open[root];
        self.parent[child] = root;
        self.size[root] += self.size[child];
        self.open[root] = old_open + self.open[child] - 2;
        self.components -= 1;
        let completed = self.open[root] == 0;
        if completed {
            self.complete += 1;
        }
        UnionUndo { child: Some(child), root, old_open, completed }
    }

    fn undo_union(&mut self, undo: UnionUndo) {
        if undo.completed {
            self.complete -= 1;
        }
        self.open[undo.root] = undo.old_open;
        if let Some(child) = undo.child {
            self.parent[child] = child;
            self.size[undo.root] -= self.size[child];
            self.components += 1;
        }
    }

    fn assign(&mut self, p: usize, q: usize) -> (ArcUndo, ArcUndo, UnionUndo) {
        self.partner[p] = q;
        self.partner[q] = p;
        self.used[q] = true;
        let sigma = self.chain.sigma();
        let first = self.add_arc(p, sigma[q]);
        let second = self.add_arc(q, sigma[p]);
        let joined = self.union(self.chain.term_of(p), self.chain.term_of(q));
        (first, second, joined)
    }

    fn unassign(&mut self, p: usize, q: usize, undo: (ArcUndo, ArcUndo, UnionUndo)) {
        let (first, second, joined) = undo;
        self.undo_union(joined);
        self.undo_arc(second);
        self.undo_arc(first);
        self.used[q] = false;
        self.partner[p] = UNPAIRED;
        self.partner[q] = UNPAIRED;
    }

    /// Upper bound on `orbits - 2 * components` over all completions.
    fn score_bound(&self, depth: usize) -> i64 {
        let unassigned = self.chain.len() - 2 * depth;
        let future_components = self.complete + usize::from(unassigned > 0);
        (self.closed + unassigned) as i64 - 2 * future_components as i64
    }

    fn run(&mut self, depth: usize, shared: &Shared) {
        if shared.stop.load(Ordering::Relaxed) {
            return;
        }
        self.nodes += 1;
        if depth == self.positives.len() {
            self.leaf(shared);
            return;
        }
        if self.score_bound(depth) <= shared.best.load(Ordering::Relaxed) {
            return;
        }
        let p = self.positives[depth];
        for &q in &self.candidates[depth] {
            if self.used[q] {
                continue;
            }
            let undo = self.assign(p, q);
            self.run(depth + 1, shared);
            self.unassign(p, q, undo);
            if shared.stop.load(Ordering::Relaxed) {
                return;
            }
        }
    }

    fn leaf(&mut self, shared: &Shared) {
        let orbits = self.closed;
        let score = orbits as i64 - 2 * self.components as i64;
        let genus = genus_from_orbits(self.chain.len(), orbits, self.components, self.terms);
        assert!(
            genus.is_some(),
            "non-integral genus: length {}, orbits {orbits}, components {}, terms {}",
            self.chain.len(),
            self.components,
            self.terms
        );
        if score > self.best_score {
            self.best_score = score;
            self.best = Some((orbits, self.components, self.partner.clone()));
            shared.best.fetch_max(score, Ordering::Relaxed);
            if score >= shared.stop_score {
                shared.stop.store(true, Ordering::Relaxed);
            }
        }
    }
}

struct Shared {
    best: AtomicI64,
    stop: AtomicBool,
    stop_score: i64,
}

/// Finds a pairing of minimal genus (or, with a target, one of genus at
/// most the target if it exists).
pub fn search(chain: &IndexedChain, options: &SearchOptions) -> Result<SearchResult, GenusError> {
    if let Some(limit) = options.max_length {
        if chain.len() > limit {
            return Err(GenusError::SizeGuard { length: chain.len(), limit });
        }
    }
    chain.check_boundary()?;
    let n = chain.len();
    let k = chain.term_count() as i64;
    // genus = (n - 2k - 2 * score) / 4
    let best_possible = (n as i64 - 2 * k) / 2;
    let stop_score = match options.target_genus {
        Some(g) => best_possible.min((n as i64 - 2 * k - 4 * g as i64 + 1).div_euclid(2)),
        None => best_possible,
    };
    let letters = chain.letters();
    let positives: Vec<usize> = (0..n).filter(|&x| !letters[x].is_inverse()).collect();
    let candidates: Vec<Vec<usize>> = positives
        .iter()
        .map(|&p| (0..n).filter(|&q| letters[q].is_inverse_of(letters[p])).collect())
        .collect();
    let shared = Shared { best: AtomicI64::new(i64::MIN), stop: AtomicBool::new(false), stop_score };

    let outcomes: Vec<(i64, Option<(usize, usize, Vec<usize>)>, u64)> =
        if options.parallel && !positives.is_empty() && candidates[0].len() > 1 {
            let p = positives[0];
            let collected = Mutex::new(Vec::new());
            candidates[0].par_iter().enumerate().for_each(|(branch, &q)| {
                let mut s = Searcher::new(chain, &positives, &candidates);
                s.assign(p, q);
                s.run(1, &shared);
                collected.lock().unwrap().push((branch, s.best_score, s.best, s.nodes));
            });
            let mut collected = collected.into_inner().unwrap();
            collected.sort_by_key(|entry| entry.0);
            collected.into_iter().map(|(_, score, best, nodes)| (score, best, nodes)).collect()
        } else {
            let mut s = Searcher::new(chain, &positives, &candidates);
            s.run(0, &shared);
            vec![(s.best_score, s.best, s.nodes)]
        };

    let nodes = outcomes.iter().map(|o| o.2).sum();
    let mut winner: Option<(i64, (usize, usize, Vec<usize>))> = None;
    for (score, best, _) in outcomes {
        if let Some(b) = best {
            if winner.as_ref().is_none_or(|(s, _)| score > *s) {
                winner = Some((score, b));
            }
        }
    }
    // a boundary always admits at least one pairing
    let (_, (orbits, components, map)) = winner.expect("boundary chain without a pairing");
    let genus = genus_from_orbits(n, orbits, components, chain.term_count())
        .expect("integrality checked at every leaf");
    Ok(SearchResult { witness: Pairing::from_vec(map), orbits, components, genus, nodes })
}

/// The orbit count of a genus-minimizing pairing, with that pairing.
pub fn max_orbits(chain: &Chain) -> Result<(usize, Pairing), GenusError> {
    let r = search(&IndexedChain::new(chain), &SearchOptions::default())?;
    Ok((r.orbits, r.witness))
}

pub fn cl_chain(chain: &Chain) -> Result<GenusCertificate, GenusError> {
    cl_chain_with(chain, &SearchOptions::default())
}

pub fn cl_chain_with(chain: &Chain, options: &SearchOptions) -> Result<GenusCertificate, GenusError> {
    Ok(search(&IndexedChain::new(chain), options)?.certificate())
}

/// Commutator length computed directly on the given terms, which may be
/// unreduced. Pairing positions refer to the terms exactly as given.
pub fn cl_words(terms: &[Word], options: &SearchOptions) -> Result<GenusCertificate, GenusError> {
    Ok(search(&IndexedChain::from_terms(terms), options)?.certificate())
}

/// Whether the chain has commutator length at most `k`, stopping early
/// once a witness is found.
pub fn decide_cl_leq(chain: &Chain, k: u32, options: &SearchOptions) -> Result<bool, GenusError> {
    let options = SearchOptions { target_genus: Some(k), ..options.clone() };
    Ok(search(&IndexedChain::new(chain), &options)?.genus <= k)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verification {
    Accepted { orbits: usize, genus: u32 },
    Rejected(RejectReason),
}

impl Verification {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verification::Accepted { .. })
    }
}

/// Checks in linear time that `pairing` is a valid pairing of `chain`
/// certifying commutator length at most `k`.
pub fn verify_certificate(chain: &Chain, pairing: &Pairing, k: u32) -> Verification {
    verify_indexed(&IndexedChain::new(chain), pairing, k)
}

pub fn verify_indexed(chain: &IndexedChain, pairing: &Pairing, k: u32) -> Verification {
    if chain.check_boundary().is_err() {
        return Verification::Rejected(RejectReason::NotBoundary);
    }
    if let Err(reason) = pairing.validate(chain) {
        return Verification::Rejected(reason);
    }
    let orbits = orbit_count(chain.sigma(), pairing);
    let components = component_count(chain, pairing);
    let genus = genus_from_orbits(chain.len(), orbits, components, chain.term_count())
        .expect("valid pairings always give an integral genus");
    if genus > k {
        Verification::Rejected(RejectReason::GenusExceeds { genus, bound: k })
    } else {
        Verification::Accepted { orbits, genus }
    }
}
