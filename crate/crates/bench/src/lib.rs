//! Inputs shared by the benchmarks.

use clgenus::{Chain, Word};

/// `[a, b]ⁿ` as a single-term chain.
pub fn commutator_power(n: usize) -> Chain {
    Chain::single("abAB".repeat(n).parse().unwrap())
}

/// `(ab)ⁿ` and `aⁿbⁿ`.
pub fn alternating_pair(n: usize) -> (Word, Word) {
    let v = "ab".repeat(n).parse().unwrap();
    let w = ("a".repeat(n) + &"b".repeat(n)).parse().unwrap();
    (v, w)
}
