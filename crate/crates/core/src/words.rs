//! Signed letters, free-group words, cyclic words and chains.
//!
//! Words use a plain ASCII text form: a lowercase letter is a generator and
//! the matching uppercase letter is its inverse, so `"abAB"` is the
//! commutator `[a, b]`. Chains are written as terms joined by `" + "`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::WordError;

/// A generator or the inverse of a generator.
///
/// Letters are ordered by generator first, with the positive letter before
/// its inverse. Cyclic canonical forms are taken with respect to this order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    generator: u8,
    inverse: bool,
}

impl Letter {
    /// `generator` must be an ASCII lowercase letter.
    pub fn new(generator: u8, inverse: bool) -> Self {
        debug_assert!(generator.is_ascii_lowercase());
        Letter { generator, inverse }
    }

    pub fn positive(generator: u8) -> Self {
        Letter::new(generator, false)
    }

    pub fn from_char(c: char) -> Option<Self> {
        if c.is_ascii_lowercase() {
            Some(Letter::new(c as u8, false))
        } else if c.is_ascii_uppercase() {
            Some(Letter::new(c.to_ascii_lowercase() as u8, true))
        } else {
            None
        }
    }

    pub fn generator(self) -> u8 {
        self.generator
    }

    pub fn is_inverse(self) -> bool {
        self.inverse
    }

    /// `+1` for a generator, `-1` for an inverse.
    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn inv(self) -> Self {
        Letter { generator: self.generator, inverse: !self.inverse }
    }

    pub fn is_inverse_of(self, other: Letter) -> bool {
        self.generator == other.generator && self.inverse != other.inverse
    }

    pub fn to_char(self) -> char {
        if self.inverse {
            self.generator.to_ascii_uppercase() as char
        } else {
            self.generator as char
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// A finite set of generators, each a single ASCII lowercase letter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    // sorted, deduplicated
    generators: Vec<u8>,
}

impl Alphabet {
    /// Builds an alphabet from the lowercase letters of `symbols`.
    pub fn new(symbols: &str) -> Result<Self, WordError> {
        let mut generators = Vec::with_capacity(symbols.len());
        for (position, c) in symbols.chars().enumerate() {
            if !c.is_ascii_lowercase() {
                return Err(WordError::Parse { position, symbol: c });
            }
            generators.push(c as u8);
        }
        generators.sort_unstable();
        generators.dedup();
        Ok(Alphabet { generators })
    }

    /// All 26 lowercase ASCII letters.
    pub fn latin() -> Self {
        Alphabet { generators: (b'a'..=b'z').collect() }
    }

    pub fn contains(&self, generator: u8) -> bool {
        self.generators.binary_search(&generator).is_ok()
    }

    pub fn generators(&self) -> &[u8] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

/// A finite sequence of letters.
///
/// `reduced` records that no two adjacent letters cancel. It is set by
/// [`Word::free_reduce`] and by constructors that produce reduced words; it
/// is never required for correctness, only for skipping work.
#[derive(Clone, Debug, Default)]
pub struct Word {
    letters: Vec<Letter>,
    reduced: bool,
}

impl PartialEq for Word {
    fn eq(&self, other: &Self) -> bool {
        self.letters == other.letters
    }
}

impl Eq for Word {}

impl std::hash::Hash for Word {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.letters.hash(state);
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters.cmp(&other.letters)
    }
}

impl Word {
    pub fn empty() -> Self {
        Word { letters: Vec::new(), reduced: true }
    }

    /// Wraps a letter sequence without reducing it.
    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word { letters, reduced: false }
    }

    /// Parses `text` against `alphabet`. No reduction is performed.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Self, WordError> {
        let mut letters = Vec::with_capacity(text.len());
        for (position, c) in text.chars().enumerate() {
            match Letter::from_char(c) {
                Some(l) if alphabet.contains(l.generator) => letters.push(l),
                _ => return Err(WordError::Parse { position, symbol: c }),
            }
        }
        Ok(Word::from_letters(letters))
    }

    /// `generator^exponent`, with negative exponents giving inverse letters.
    pub fn power_of(generator: u8, exponent: i64) -> Self {
        let letter = Letter::new(generator, exponent < 0);
        Word { letters: vec![letter; exponent.unsigned_abs() as usize], reduced: true }
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

    pub fn is_marked_reduced(&self) -> bool {
        self.reduced
    }

    /// True when every letter is a generator (no inverses).
    pub fn is_positive(&self) -> bool {
        self.letters.iter().all(|l| !l.inverse)
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.letters.windows(2).all(|p| !p[0].is_inverse_of(p[1]))
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_freely_reduced()
            && match (self.letters.first(), self.letters.last()) {
                (Some(&f), Some(&l)) if self.letters.len() > 1 => !f.is_inverse_of(l),
                _ => true,
            }
    }

    /// The freely reduced representative of the same group element.
    pub fn free_reduce(&self) -> Word {
        if self.reduced {
            return self.clone();
        }
        let mut stack: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            match stack.last() {
                Some(&top) if top.is_inverse_of(l) => {
                    stack.pop();
                }
                _ => stack.push(l),
            }
        }
        Word { letters: stack, reduced: true }
    }

    /// Splits the free reduction into `conjugator · core · conjugator⁻¹`
    /// with `core` cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let reduced = self.free_reduce();
        let letters = &reduced.letters;
        let mut lo = 0;
        let mut hi = letters.len();
        while hi - lo >= 2 && letters[lo].is_inverse_of(letters[hi - 1]) {
            lo += 1;
            hi -= 1;
        }
        let core = Word { letters: letters[lo..hi].to_vec(), reduced: true };
        let conjugator = Word { letters: letters[..lo].to_vec(), reduced: true };
        (core, conjugator)
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
            reduced: self.reduced,
        }
    }

    /// Plain concatenation, without cancellation.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Word::from_letters(letters)
    }

    /// Product in the free group (concatenate, then reduce).
    pub fn mul(&self, other: &Word) -> Word {
        self.concat(other).free_reduce()
    }

    /// `x y x⁻¹ y⁻¹`, freely reduced.
    pub fn commutator(x: &Word, y: &Word) -> Word {
        x.concat(y).concat(&x.inverse()).concat(&y.inverse()).free_reduce()
    }

    /// The cyclic rotation starting at letter `k` (taken modulo the length).
    pub fn rotate(&self, k: usize) -> Word {
        if self.letters.is_empty() {
            return self.clone();
        }
        let k = k % self.letters.len();
        let mut letters = Vec::with_capacity(self.letters.len());
        letters.extend_from_slice(&self.letters[k..]);
        letters.extend_from_slice(&self.letters[..k]);
        Word { letters, reduced: false }
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> Word {
        Word::from_letters(self.letters[range].to_vec())
    }

    /// Number of occurrences of each positive letter. Only meaningful for
    /// positive words.
    pub fn letter_counts(&self) -> BTreeMap<u8, usize> {
        let mut counts = BTreeMap::new();
        for l in &self.letters {
            *counts.entry(l.generator).or_insert(0) += 1;
        }
        counts
    }

    /// Signed exponent sum per generator (the image in the abelianization).
    pub fn exponent_sums(&self) -> BTreeMap<u8, i64> {
        let mut sums = BTreeMap::new();
        add_exponents(&mut sums, self);
        sums
    }
}

fn add_exponents(sums: &mut BTreeMap<u8, i64>, w: &Word) {
    for l in w.letters() {
        *sums.entry(l.generator).or_insert(0) += l.sign();
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Word::parse(s, &Alphabet::latin())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// True iff `v` and `w` use every letter the same number of times.
pub fn is_related(v: &Word, w: &Word) -> Result<bool, WordError> {
    if !v.is_positive() || !w.is_positive() {
        return Err(WordError::NotPositive);
    }
    Ok(v.letter_counts() == w.letter_counts())
}

/// Starting index of the least rotation of `s` (Booth's algorithm).
pub fn least_rotation<T: Ord>(s: &[T]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let at = |i: isize| &s[i as usize % n];
    let mut failure = vec![-1isize; 2 * n];
    let mut k: isize = 0;
    for j in 1..(2 * n) as isize {
        let sj = at(j);
        let mut i = failure[(j - k - 1) as usize];
        while i != -1 && sj != at(k + i + 1) {
            if sj < at(k + i + 1) {
                k = j - i - 1;
            }
            i = failure[i as usize];
        }
        if sj != at(k + i + 1) {
            // here i == -1
            if sj < at(k) {
                k = j;
            }
            failure[(j - k) as usize] = -1;
        } else {
            failure[(j - k) as usize] = i + 1;
        }
    }
    k as usize % n
}

/// A word up to cyclic rotation, stored as its least rotation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicWord {
    canonical: Word,
}

impl CyclicWord {
    pub fn new(w: &Word) -> Self {
        let k = least_rotation(w.letters());
        let mut canonical = w.rotate(k);
        canonical.reduced = w.reduced && w.is_cyclically_reduced();
        CyclicWord { canonical }
    }

    pub fn canonical(&self) -> &Word {
        &self.canonical
    }

    pub fn into_word(self) -> Word {
        self.canonical
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.canonical.fmt(f)
    }
}

/// True iff `w` is a cyclic rotation of `v`.
pub fn is_cyclic_rotation(v: &Word, w: &Word) -> bool {
    v.len() == w.len() && CyclicWord::new(v) == CyclicWord::new(w)
}

/// A formal sum of words, each stored cyclically reduced.
///
/// The constructor replaces every term by its cyclically reduced core and
/// keeps the conjugator that was peeled off; terms that reduce to the empty
/// word are dropped. Being a boundary (total exponent sums all zero) is not
/// enforced here; see [`Chain::is_boundary`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    terms: Vec<Word>,
    conjugators: Vec<Word>,
}

impl Chain {
    pub fn new<I: IntoIterator<Item = Word>>(terms: I) -> Self {
        let mut cores = Vec::new();
        let mut conjugators = Vec::new();
        for t in terms {
            let (core, conj) = t.cyclic_reduce();
            if !core.is_empty() {
                cores.push(core);
                conjugators.push(conj);
            }
        }
        Chain { terms: cores, conjugators }
    }

    /// Parses terms separated by `+` against `alphabet`.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Self, WordError> {
        let mut terms = Vec::new();
        let mut offset = 0;
        for raw in text.split('+') {
            let lead = raw.len() - raw.trim_start().len();
            let term = Word::parse(raw.trim(), alphabet).map_err(|e| match e {
                WordError::Parse { position, symbol } => {
                    WordError::Parse { position: offset + lead + position, symbol }
                }
                other => other,
            })?;
            terms.push(term);
            offset += raw.chars().count() + 1;
        }
        Ok(Chain::new(terms))
    }

    pub fn single(w: Word) -> Self {
        Chain::new([w])
    }

    pub fn terms(&self) -> &[Word] {
        &self.terms
    }

    /// The conjugators removed from each term, aligned with [`Chain::terms`].
    pub fn conjugators(&self) -> &[Word] {
        &self.conjugators
    }

    pub fn total_length(&self) -> usize {
        self.terms.iter().map(Word::len).sum()
    }

    pub fn exponent_sums(&self) -> BTreeMap<u8, i64> {
        let mut sums = BTreeMap::new();
        for t in &self.terms {
            add_exponents(&mut sums, t);
        }
        sums
    }

    /// True iff the product of the terms lies in the commutator subgroup.
    pub fn is_boundary(&self) -> bool {
        self.exponent_sums().values().all(|&s| s == 0)
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            t.fmt(f)?;
        }
        Ok(())
    }
}

impl FromStr for Chain {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Chain::parse(s, &Alphabet::latin())
    }
}

impl Serialize for Chain {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Chain {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn ab() -> Alphabet {
        Alphabet::new("ab").unwrap()
    }

    #[test]
    fn parse_transliterates() {
        let word = Word::parse("abAB", &ab()).unwrap();
        let expected = vec![
            Letter::new(b'a', false),
            Letter::new(b'b', false),
            Letter::new(b'a', true),
            Letter::new(b'b', true),
        ];
        assert_eq!(word.letters(), &expected[..]);
        assert!(!word.is_marked_reduced());
        assert!(Word::parse("", &ab()).unwrap().is_empty());
    }

    #[test]
    fn parse_rejects_foreign_symbol() {
        assert_eq!(
            Word::parse("abc", &ab()),
            Err(WordError::Parse { position: 2, symbol: 'c' })
        );
        assert!(Word::parse("a b", &ab()).is_err());
    }

    /// Independent stack oracle: cancel with an explicit index-based loop.
    fn reduce_oracle(s: &str) -> String {
        let mut chars: Vec<char> = s.chars().collect();
        loop {
            let pos = chars.windows(2).position(|p| {
                p[0] != p[1] && p[0].to_ascii_lowercase() == p[1].to_ascii_lowercase()
            });
            match pos {
                Some(i) => {
                    chars.drain(i..i + 2);
                }
                None => return chars.into_iter().collect(),
            }
        }
    }

    #[test]
    fn free_reduce_examples() {
        assert_eq!(w("abBA").free_reduce(), Word::empty());
        assert_eq!(w("abAB").free_reduce().to_string(), "abAB");
        assert_eq!(reduce_oracle("aabBBA"), "aaBA");
        assert_eq!(w("aabBBA").free_reduce().to_string(), "aaBA");
        assert!(w("aabBBA").free_reduce().is_marked_reduced());
    }

    #[test]
    fn cyclic_reduce_examples() {
        let (core, conj) = w("Aba").cyclic_reduce();
        assert_eq!((core.to_string(), conj.to_string()), ("b".into(), "A".into()));
        let (core, conj) = w("abAB").cyclic_reduce();
        assert_eq!((core.to_string(), conj.to_string()), ("abAB".into(), "".into()));
        // b⁻¹ a b a⁻¹ has first letter B and last letter A, which do not
        // cancel, so the repeated end-cancellation oracle stops at once.
        let (core, conj) = w("BabA").cyclic_reduce();
        assert_eq!((core.to_string(), conj.to_string()), ("BabA".into(), "".into()));
        let (core, conj) = w("abABA").cyclic_reduce();
        assert_eq!((core.to_string(), conj.to_string()), ("A".into(), "ab".into()));
    }

    #[test]
    fn invert_examples() {
        assert_eq!(w("ab").inverse().to_string(), "BA");
        assert_eq!(Word::empty().inverse(), Word::empty());
        assert_eq!(w("aBc").inverse().to_string(), "CbA");
    }

    #[test]
    fn relatedness() {
        assert_eq!(is_related(&w("ababab"), &w("aaabbb")), Ok(true));
        assert_eq!(is_related(&w("ab"), &w("ba")), Ok(true));
        assert_eq!(is_related(&w("ab"), &w("aab")), Ok(false));
        assert_eq!(is_related(&w("aB"), &w("ab")), Err(WordError::NotPositive));
    }

    #[test]
    fn boundary_chains() {
        assert!("abAB".parse::<Chain>().unwrap().is_boundary());
        assert!(!"ab".parse::<Chain>().unwrap().is_boundary());
        assert!("ab + BA".parse::<Chain>().unwrap().is_boundary());
    }

    #[test]
    fn chain_constructor_reduces_and_drops_empty() {
        let c: Chain = "Aba + abBA + abAB".parse().unwrap();
        assert_eq!(c.terms().len(), 2);
        assert_eq!(c.terms()[0].to_string(), "b");
        assert_eq!(c.conjugators()[0].to_string(), "A");
        assert_eq!(c.to_string(), "b + abAB");
    }

    #[test]
    fn chain_parse_reports_absolute_position() {
        let err = Chain::parse("ab + ac", &ab()).unwrap_err();
        assert_eq!(err, WordError::Parse { position: 6, symbol: 'c' });
    }

    #[test]
    fn cyclic_word_canonical_is_min_rotation() {
        for s in ["baab", "abab", "ABab", "bAaB", "cbacba", "a", ""] {
            let word = w(s);
            let brute = (0..word.len().max(1)).map(|k| word.rotate(k)).min().unwrap();
            assert_eq!(CyclicWord::new(&word).canonical(), &brute, "{s}");
        }
        assert!(is_cyclic_rotation(&w("abab"), &w("baba")));
        assert!(!is_cyclic_rotation(&w("aabb"), &w("abab")));
    }

    #[test]
    fn letter_order_puts_positive_first() {
        let a = Letter::positive(b'a');
        assert!(a < a.inv());
        assert!(a.inv() < Letter::positive(b'b'));
    }
}
