//! Interchange decompositions of words in the commutator subgroup.
//!
//! A cyclically reduced word is written as `w₁ x⁻¹ w₂ y⁻¹ w₃ x w₄ y w₅`
//! with letters `x, y`; exchanging `w₂` with `x w₄ y` and dropping the four
//! marked letters leaves `w₁ w₄ w₃ w₂ w₅`, and the difference is a single
//! commutator. Some such decomposition lowers commutator length by exactly
//! one, which gives an explicit factorization and, for fixed `k`, a
//! polynomial decision procedure for `cl(w) ≤ k`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::FiError;
use crate::genus::{self, SearchOptions};
use crate::words::{CyclicWord, Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiDecomposition {
    positions: [usize; 4],
    x: Letter,
    y: Letter,
    segments: [Word; 5],
}

impl FiDecomposition {
    fn at(word: &Word, positions: [usize; 4]) -> Self {
        let [p1, p2, p3, p4] = positions;
        let letters = word.letters();
        let segments = [
            word.slice(0..p1),
            word.slice(p1 + 1..p2),
            word.slice(p2 + 1..p3),
            word.slice(p3 + 1..p4),
            word.slice(p4 + 1..letters.len()),
        ];
        FiDecomposition { positions, x: letters[p3], y: letters[p4], segments }
    }

    /// Positions of `x⁻¹, y⁻¹, x, y`.
    pub fn positions(&self) -> [usize; 4] {
        self.positions
    }

    pub fn x(&self) -> Letter {
        self.x
    }

    pub fn y(&self) -> Letter {
        self.y
    }

    /// `w₁ … w₅`.
    pub fn segments(&self) -> &[Word; 5] {
        &self.segments
    }

    /// The decomposed word, `w₁ x⁻¹ w₂ y⁻¹ w₃ x w₄ y w₅`.
    pub fn word(&self) -> Word {
        let [w1, w2, w3, w4, w5] = &self.segments;
        let x = letter_word(self.x);
        let y = letter_word(self.y);
        w1.concat(&x.inverse())
            .concat(w2)
            .concat(&y.inverse())
            .concat(w3)
            .concat(&x)
            .concat(w4)
            .concat(&y)
            .concat(w5)
    }

    /// `w₁ w₄ w₃ w₂ w₅`, freely reduced.
    pub fn remainder(&self) -> Word {
        let [w1, w2, w3, w4, w5] = &self.segments;
        w1.concat(w4).concat(w3).concat(w2).concat(w5).free_reduce()
    }
}

fn letter_word(l: Letter) -> Word {
    Word::from_letters(vec![l])
}

fn pattern_matches(letters: &[Letter], [p1, p2, p3, p4]: [usize; 4]) -> bool {
    let x = letters[p1].inv();
    let y = letters[p2].inv();
    letters[p3] == x && letters[p4] == y
}

fn check_input(w: &Word) -> Result<(), FiError> {
    if !w.is_cyclically_reduced() {
        return Err(FiError::NotCyclicallyReduced);
    }
    genus::IndexedChain::from_terms(std::slice::from_ref(w)).check_boundary()?;
    Ok(())
}

/// All decompositions of `w`, in lexicographic order of the four positions.
pub fn find_decompositions(w: &Word) -> Result<impl Iterator<Item = FiDecomposition> + '_, FiError> {
    check_input(w)?;
    Ok(decompositions(w))
}

fn decompositions(w: &Word) -> impl Iterator<Item = FiDecomposition> + '_ {
    let letters = w.letters();
    let n = letters.len();
    (0..n)
        .flat_map(move |p1| {
            (p1 + 1..n).flat_map(move |p2| {
                (p2 + 1..n).flat_map(move |p3| (p3 + 1..n).map(move |p4| [p1, p2, p3, p4]))
            })
        })
        .filter(move |&q| pattern_matches(letters, q))
        .map(move |q| FiDecomposition::at(w, q))
}

/// The remainder and a commutator pair `(u, t)` with `[u, t] · remainder = w`
/// in the free group.
///
/// With `c = w₁ x⁻¹ w₂ y⁻¹`, the pair is `u = c (w₃ x w₄) c⁻¹` and
/// `t = c (y w₂⁻¹ w₃⁻¹) c⁻¹`, both freely reduced.
pub fn apply_decomposition(d: &FiDecomposition) -> (Word, (Word, Word)) {
    let [w1, w2, w3, _, _] = &d.segments;
    let w4 = &d.segments[3];
    let x = letter_word(d.x);
    let y = letter_word(d.y);
    let c = w1.concat(&x.inverse()).concat(w2).concat(&y.inverse());
    let a = w3.concat(&x).concat(w4);
    let b = y.concat(&w2.inverse()).concat(&w3.inverse());
    let u = c.concat(&a).concat(&c.inverse()).free_reduce();
    let t = c.concat(&b).concat(&c.inverse()).free_reduce();
    (d.remainder(), (u, t))
}

/// `cl(w) ≤ k` by depth-`k` recursion over decompositions of `w` and its
/// rotations. Runs in `O(|w|^(4k+1))` time in the worst case; results are
/// memoized on cyclic words.
pub fn decide_cl_leq(w: &Word, k: u32) -> Result<bool, FiError> {
    let (core, _) = w.cyclic_reduce();
    check_input(&core)?;
    let mut memo = HashMap::new();
    Ok(decide_rec(&core, k, &mut memo))
}

fn decide_rec(core: &Word, k: u32, memo: &mut HashMap<(CyclicWord, u32), bool>) -> bool {
    if core.is_empty() {
        return true;
    }
    if k == 0 {
        return false;
    }
    let key = (CyclicWord::new(core), k);
    if let Some(&known) = memo.get(&key) {
        return known;
    }
    let mut found = false;
    'rotations: for r in 0..core.len() {
        let rotated = core.rotate(r);
        for d in decompositions(&rotated) {
            let (next, _) = d.remainder().cyclic_reduce();
            if decide_rec(&next, k - 1, memo) {
                found = true;
                break 'rotations;
            }
        }
    }
    memo.insert(key, found);
    found
}

/// `[u₁,t₁] ⋯ [u_m,t_m] · tail`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutatorFactorization {
    pub pairs: Vec<(Word, Word)>,
    pub tail: Word,
}

impl CommutatorFactorization {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// The freely reduced product.
    pub fn product(&self) -> Word {
        self.pairs
            .iter()
            .fold(Word::empty(), |acc, (u, t)| acc.mul(&Word::commutator(u, t)))
            .mul(&self.tail)
    }
}

/// A product of exactly `cl(w)` commutators equal to `w`.
///
/// Each step takes the first decomposition (lexicographic, trying the word
/// as given before its rotations) whose remainder has genus exactly one
/// less, measured with the exact pairing search.
pub fn factorize(w: &Word) -> Result<CommutatorFactorization, FiError> {
    let reduced = w.free_reduce();
    genus::IndexedChain::from_terms(std::slice::from_ref(&reduced)).check_boundary()?;
    let exact = |word: &Word| -> u32 {
        let (core, _) = word.cyclic_reduce();
        genus::cl_words(&[core], &SearchOptions::default())
            .expect("remainders of boundary words are boundaries")
            .genus
    };

    let mut pairs = Vec::new();
    // remaining part of w is conjugator · current · conjugator⁻¹
    let mut conjugator = Word::empty();
    let mut current = reduced;
    let mut genus = exact(&current);
    while genus > 0 {
        let (core, t) = current.cyclic_reduce();
        let (rotation, d) = (0..core.len())
            .find_map(|r| {
                let rotated = core.rotate(r);
                let found = decompositions(&rotated).find(|d| exact(&d.remainder()) + 1 == genus);
                found.map(|d| (r, d))
            })
            .expect("a genus-reducing decomposition exists for every word of positive genus");
        let (remainder, (u, v)) = apply_decomposition(&d);
        // core = s · rotated · s⁻¹ with s the first `rotation` letters
        let g = conjugator.concat(&t).concat(&core.slice(0..rotation)).free_reduce();
        let conj = |x: &Word| g.concat(x).concat(&g.inverse()).free_reduce();
        pairs.push((conj(&u), conj(&v)));
        conjugator = g;
        current = remainder;
        genus -= 1;
        debug_assert_eq!(exact(&current), genus);
    }
    let tail = conjugator.concat(&current).concat(&conjugator.inverse()).free_reduce();
    Ok(CommutatorFactorization { pairs, tail })
}
