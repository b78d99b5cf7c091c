//! Cyclic block interchanges between related positive words.
//!
//! A move rotates a word and then swaps two disjoint blocks,
//! `w₁ w₂ w₃ w₄ ↦ w₁ w₄ w₃ w₂` (any block may be empty). The distance between
//! two related words is the commutator length of `v + w⁻¹`; an optimal
//! pairing for that chain is turned into an optimal move sequence by orbit
//! surgery, one move per unit of genus.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::CbiError;
use crate::genus::{self, IndexedChain, Pairing, SearchOptions};
use crate::words::{is_cyclic_rotation, is_related, least_rotation, Letter, Word};

/// Longest word accepted by [`oracle_bfs`].
pub const BFS_LENGTH_LIMIT: usize = 12;

/// Rotate by `rotation`, cut at `cuts`, and emit `w₁ w₄ w₃ w₂`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlockInterchange {
    pub rotation: usize,
    pub cuts: [usize; 3],
}

impl BlockInterchange {
    pub fn new(rotation: usize, cuts: [usize; 3]) -> Self {
        BlockInterchange { rotation, cuts }
    }

    /// The move that leaves every word unchanged.
    pub fn identity() -> Self {
        BlockInterchange::new(0, [0, 0, 0])
    }

    pub fn check(&self, length: usize) -> Result<(), CbiError> {
        let [c1, c2, c3] = self.cuts;
        let rotation_ok = self.rotation < length.max(1);
        if !rotation_ok || c1 > c2 || c2 > c3 || c3 > length {
            return Err(CbiError::OutOfBounds { rotation: self.rotation, cuts: self.cuts, length });
        }
        Ok(())
    }

    /// Where each position of the original word ends up.
    pub fn position_map(&self, length: usize) -> Result<Vec<usize>, CbiError> {
        self.check(length)?;
        let [c1, c2, c3] = self.cuts;
        let n = length;
        Ok((0..n)
            .map(|i| {
                let rel = (i + n - self.rotation) % n;
                if rel < c1 {
                    rel
                } else if rel < c2 {
                    c1 + (n - c3) + (c3 - c2) + (rel - c1)
                } else if rel < c3 {
                    c1 + (n - c3) + (rel - c2)
                } else {
                    c1 + (rel - c3)
                }
            })
            .collect())
    }

    pub fn apply(&self, v: &Word) -> Result<Word, CbiError> {
        let map = self.position_map(v.len())?;
        let mut letters = v.letters().to_vec();
        for (i, &j) in map.iter().enumerate() {
            letters[j] = v.letters()[i];
        }
        Ok(Word::from_letters(letters))
    }

    /// A move taking the image of a word of this length back to a rotation
    /// of the word.
    pub fn undo(&self, length: usize) -> Result<BlockInterchange, CbiError> {
        self.check(length)?;
        let [c1, c2, c3] = self.cuts;
        let w3 = c3 - c2;
        let w4 = length - c3;
        Ok(BlockInterchange::new(0, [c1, c1 + w4, c1 + w4 + w3]))
    }
}

pub fn apply_interchange(v: &Word, m: &BlockInterchange) -> Result<Word, CbiError> {
    m.apply(v)
}

/// A start word and the moves applied to it in order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterchangeSequence {
    pub start: Word,
    pub moves: Vec<BlockInterchange>,
}

impl InterchangeSequence {
    pub fn new(start: Word) -> Self {
        InterchangeSequence { start, moves: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// Every word along the way, starting with `start`.
    pub fn trajectory(&self) -> Result<Vec<Word>, CbiError> {
        let mut words = vec![self.start.clone()];
        for m in &self.moves {
            let next = m.apply(words.last().unwrap())?;
            words.push(next);
        }
        Ok(words)
    }

    pub fn final_word(&self) -> Result<Word, CbiError> {
        let mut current = self.start.clone();
        for m in &self.moves {
            current = m.apply(&current)?;
        }
        Ok(current)
    }

    /// Whether the final word is a rotation of `target`.
    pub fn reaches(&self, target: &Word) -> bool {
        self.final_word().is_ok_and(|end| is_cyclic_rotation(&end, target))
    }
}

/// True iff `s` starts at `v` and ends at a rotation of `w`.
pub fn verify_sequence(v: &Word, w: &Word, s: &InterchangeSequence) -> bool {
    s.start == *v && s.reaches(w)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GammaKind {
    /// `[base, i1) [i1, i2) [i2, base)` becomes `[base, i1) [i2, base) [i1, i2)`.
    TwoBlock { base: usize, i1: usize, i2: usize },
    /// `[base, i1) [i1, i2) [i2, i3) [i3, base)` becomes
    /// `[base, i1) [i3, base) [i2, i3) [i1, i2)`.
    ThreeBlock { base: usize, i1: usize, i2: usize, i3: usize },
}

/// A block interchange of `v` viewed as a permutation of the positions of
/// the chain `v + w⁻¹`: positions of `v` move with their letters, positions
/// of `w⁻¹` stay put.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaMap {
    kind: GammaKind,
    interchange: BlockInterchange,
    permutation: Vec<usize>,
}

impl GammaMap {
    pub fn two_block(length: usize, base: usize, i1: usize, i2: usize) -> Result<Self, CbiError> {
        let n = length.max(1);
        let cuts = [(i1 + n - base) % n, (i2 + n - base) % n, (i2 + n - base) % n];
        Self::build(length, GammaKind::TwoBlock { base, i1, i2 }, BlockInterchange::new(base, cuts))
    }

    pub fn three_block(length: usize, base: usize, i1: usize, i2: usize, i3: usize) -> Result<Self, CbiError> {
        let n = length.max(1);
        let mut last = (i3 + n - base) % n;
        if last == 0 {
            last = length;
        }
        let cuts = [(i1 + n - base) % n, (i2 + n - base) % n, last];
        Self::build(length, GammaKind::ThreeBlock { base, i1, i2, i3 }, BlockInterchange::new(base, cuts))
    }

    fn build(length: usize, kind: GammaKind, interchange: BlockInterchange) -> Result<Self, CbiError> {
        let mut permutation = interchange.position_map(length)?;
        permutation.extend(length..2 * length);
        Ok(GammaMap { kind, interchange, permutation })
    }

    pub fn kind(&self) -> GammaKind {
        self.kind
    }

    pub fn interchange(&self) -> BlockInterchange {
        self.interchange
    }

    /// The permutation of `0..2n`.
    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    /// `γ π γ⁻¹`, a pairing of the chain with `v` replaced by its image.
    pub fn conjugate(&self, pairing: &Pairing) -> Pairing {
        let gamma = &self.permutation;
        let mut map = vec![0; gamma.len()];
        for x in 0..gamma.len() {
            map[gamma[x]] = gamma[pairing.partner(x)];
        }
        Pairing::from_vec(map)
    }
}

fn check_pair(v: &Word, w: &Word) -> Result<(), CbiError> {
    if !is_related(v, w)? {
        return Err(CbiError::NotRelated);
    }
    Ok(())
}

fn chain_terms(v: &Word, w: &Word) -> [Word; 2] {
    [v.clone(), w.inverse()]
}

/// Distance between related positive words.
pub fn d_cbi(v: &Word, w: &Word) -> Result<u32, CbiError> {
    d_cbi_with(v, w, &SearchOptions::default())
}

pub fn d_cbi_with(v: &Word, w: &Word, options: &SearchOptions) -> Result<u32, CbiError> {
    check_pair(v, w)?;
    if is_cyclic_rotation(v, w) {
        return Ok(0);
    }
    Ok(genus::cl_words(&chain_terms(v, w), options)?.genus)
}

/// The chain `v + w⁻¹` together with one pairing of it.
struct SurgeryState {
    v: Word,
    inverse_w: Word,
    pairing: Pairing,
}

impl SurgeryState {
    fn chain(&self) -> IndexedChain {
        IndexedChain::from_terms(&[self.v.clone(), self.inverse_w.clone()])
    }

    fn orbits(&self) -> usize {
        genus::orbit_count(self.chain().sigma(), &self.pairing)
    }

    /// `α²` restricted to the positions of `v`, where `α = σ∘π`.
    fn alpha_squared(&self) -> Vec<usize> {
        let chain = self.chain();
        let sigma = chain.sigma();
        let alpha = |x: usize| sigma[self.pairing.partner(x)];
        (0..self.v.len()).map(|i| alpha(alpha(i))).collect()
    }

    /// The move that splits one more pair of orbits, or `None` once `α²` is
    /// the identity.
    fn next_gamma(&self) -> Result<Option<GammaMap>, CbiError> {
        let n = self.v.len();
        let a2 = self.alpha_squared();
        let moved = |i: usize| a2[i % n] != i % n;
        let Some(i0) = (0..n).filter(|&i| moved(i)).min_by_key(|&i| ((a2[i] + n - i) % n, i)) else {
            return Ok(None);
        };
        let k = (1..n).find(|&k| moved(i0 + k)).expect("a moved point has a moved image");
        let i1 = (i0 + k) % n;
        let i2 = a2[i0];

        let mut cycle = vec![usize::MAX; n];
        for start in 0..n {
            let mut x = start;
            while cycle[x] == usize::MAX {
                cycle[x] = start;
                x = a2[x];
            }
        }
        let gamma = if cycle[i1] == cycle[i0] {
            GammaMap::two_block(n, i0, i1, i2)?
        } else {
            GammaMap::three_block(n, i0, i1, i2, a2[i1])?
        };
        Ok(Some(gamma))
    }
}

/// A shortest move sequence from `v` to a rotation of `w`.
pub fn extract_sequence(v: &Word, w: &Word) -> Result<InterchangeSequence, CbiError> {
    extract_sequence_with(v, w, &SearchOptions::default())
}

pub fn extract_sequence_with(v: &Word, w: &Word, options: &SearchOptions) -> Result<InterchangeSequence, CbiError> {
    check_pair(v, w)?;
    let mut sequence = InterchangeSequence::new(v.clone());
    if is_cyclic_rotation(v, w) {
        return Ok(sequence);
    }
    let certificate = genus::cl_words(&chain_terms(v, w), options)?;
    let mut state = SurgeryState { v: v.clone(), inverse_w: w.inverse(), pairing: certificate.pairing };
    let mut orbits = state.orbits();
    while let Some(gamma) = state.next_gamma()? {
        let next_v = gamma.interchange().apply(&state.v)?;
        let next = SurgeryState { v: next_v, inverse_w: state.inverse_w.clone(), pairing: gamma.conjugate(&state.pairing) };
        let next_orbits = next.orbits();
        if next_orbits != orbits + 2 {
            return Err(CbiError::Surgery(format!(
                "move {:?} changed the orbit count from {} to {}",
                gamma.interchange(),
                orbits,
                next_orbits
            )));
        }
        sequence.moves.push(gamma.interchange());
        state = next;
        orbits = next_orbits;
    }
    if sequence.len() != certificate.genus as usize || !sequence.reaches(w) {
        return Err(CbiError::Surgery(format!(
            "{} moves for distance {} did not reach the target",
            sequence.len(),
            certificate.genus
        )));
    }
    Ok(sequence)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BfsDistance {
    Exact(usize),
    Exceeded,
}

fn canonical(letters: &[Letter]) -> Vec<Letter> {
    let k = least_rotation(letters);
    let mut out = Vec::with_capacity(letters.len());
    out.extend_from_slice(&letters[k..]);
    out.extend_from_slice(&letters[..k]);
    out
}

/// Canonical forms of every word one move away from `s`.
fn neighbours(s: &[Letter]) -> HashSet<Vec<Letter>> {
    let n = s.len();
    let mut out = HashSet::new();
    let mut rotated = Vec::with_capacity(n);
    let mut image = Vec::with_capacity(n);
    for r in 0..n {
        rotated.clear();
        rotated.extend_from_slice(&s[r..]);
        rotated.extend_from_slice(&s[..r]);
        for c1 in 0..=n {
            for c2 in c1..=n {
                for c3 in c2..=n {
                    image.clear();
                    image.extend_from_slice(&rotated[..c1]);
                    image.extend_from_slice(&rotated[c3..]);
                    image.extend_from_slice(&rotated[c2..c3]);
                    image.extend_from_slice(&rotated[c1..c2]);
                    out.insert(canonical(&image));
                }
            }
        }
    }
    out
}

/// Distance by breadth-first search over rotation classes. `cap` defaults
/// to `|v|`.
pub fn oracle_bfs(v: &Word, w: &Word, cap: Option<usize>) -> Result<BfsDistance, CbiError> {
    check_pair(v, w)?;
    if v.len() > BFS_LENGTH_LIMIT {
        return Err(CbiError::SizeGuard { length: v.len(), limit: BFS_LENGTH_LIMIT });
    }
    let cap = cap.unwrap_or(v.len());
    let start = canonical(v.letters());
    let target = canonical(w.letters());
    if start == target {
        return Ok(BfsDistance::Exact(0));
    }
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([(start, 0usize)]);
    while let Some((s, d)) = queue.pop_front() {
        if d >= cap {
            break;
        }
        let mut next: Vec<Vec<Letter>> = neighbours(&s).into_iter().filter(|t| !seen.contains(t)).collect();
        next.sort();
        for t in next {
            if t == target {
                return Ok(BfsDistance::Exact(d + 1));
            }
            seen.insert(t.clone());
            queue.push_back((t, d + 1));
        }
    }
    Ok(BfsDistance::Exceeded)
}
