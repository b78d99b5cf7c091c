//! Instance encoders and witness decoders for the hardness reductions:
//! 3-PARTITION to block-interchange distance, the binary-alphabet encoding,
//! block-interchange distance to single-word commutator length, and exact
//! bin packing to genus-zero chains.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cbi::{verify_sequence, BlockInterchange, InterchangeSequence};
use crate::error::{CbiError, ReduceError};
use crate::genus::{self, SearchOptions};
use crate::words::{is_related, Chain, Letter, Word};

/// `3n` numbers strictly between `N/4` and `N/2` summing to `n·N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreePartitionInstance {
    pub n: usize,
    #[serde(rename = "N")]
    pub target: usize,
    pub a: Vec<usize>,
}

impl ThreePartitionInstance {
    pub fn validate(&self) -> Result<(), ReduceError> {
        let invalid = |m: String| Err(ReduceError::InvalidInstance(m));
        if self.n == 0 {
            return invalid("n must be positive".into());
        }
        if self.a.len() != 3 * self.n {
            return invalid(format!("expected {} numbers, found {}", 3 * self.n, self.a.len()));
        }
        for (i, &x) in self.a.iter().enumerate() {
            if 4 * x <= self.target || 2 * x >= self.target {
                return invalid(format!("a[{}] = {} is not strictly between N/4 and N/2 for N = {}", i + 1, x, self.target));
            }
        }
        let sum: usize = self.a.iter().sum();
        if sum != self.n * self.target {
            return invalid(format!("numbers sum to {}, expected n·N = {}", sum, self.n * self.target));
        }
        Ok(())
    }
}

/// Is `d(v, w) ≤ k`?
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CbiInstance {
    pub v: Word,
    pub w: Word,
    pub k: usize,
}

fn letter(c: char) -> Letter {
    Letter::positive(c as u8)
}

fn repeat(out: &mut Vec<Letter>, c: char, times: usize) {
    out.extend(std::iter::repeat_n(letter(c), times));
}

/// `v = a^{n+1} (b c^{a₁} d) ⋯ (b c^{a₃ₙ} d) b`, `w = (a c^N d³)ⁿ a b^{3n+1}`,
/// `k = 3n`.
pub fn encode_3p(inst: &ThreePartitionInstance) -> Result<CbiInstance, ReduceError> {
    inst.validate()?;
    let n = inst.n;
    let mut v = Vec::new();
    repeat(&mut v, 'a', n + 1);
    for &x in &inst.a {
        repeat(&mut v, 'b', 1);
        repeat(&mut v, 'c', x);
        repeat(&mut v, 'd', 1);
    }
    repeat(&mut v, 'b', 1);
    let mut w = Vec::new();
    for _ in 0..n {
        repeat(&mut w, 'a', 1);
        repeat(&mut w, 'c', inst.target);
        repeat(&mut w, 'd', 3);
    }
    repeat(&mut w, 'a', 1);
    repeat(&mut w, 'b', 3 * n + 1);
    Ok(CbiInstance { v: Word::from_letters(v), w: Word::from_letters(w), k: 3 * n })
}

/// Checks that `triples` (1-based indices) split the numbers into families
/// summing to `N`.
pub fn check_solution(inst: &ThreePartitionInstance, triples: &[[usize; 3]]) -> Result<(), ReduceError> {
    inst.validate()?;
    let fail = |m: String| Err(ReduceError::NotASolution(m));
    if triples.len() != inst.n {
        return fail(format!("expected {} triples, found {}", inst.n, triples.len()));
    }
    let mut used = vec![false; inst.a.len()];
    for t in triples {
        for &i in t {
            if i == 0 || i > inst.a.len() {
                return fail(format!("index {} is out of range 1..={}", i, inst.a.len()));
            }
            if std::mem::replace(&mut used[i - 1], true) {
                return fail(format!("index {} is used twice", i));
            }
        }
        let sum: usize = t.iter().map(|&i| inst.a[i - 1]).sum();
        if sum != inst.target {
            return fail(format!("triple {:?} sums to {}, not {}", t, sum, inst.target));
        }
    }
    Ok(())
}

/// Origin of each letter of the encoded `v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tag {
    A(usize),
    C(usize),
    D(usize),
    B,
}

/// Moves each block `c^{aᵢ} d` into its family, one move per block: the
/// first block of family `g` goes right after the `g`-th `a`, later blocks
/// go just before the `d`s already there.
pub fn decode_3p_solution(inst: &ThreePartitionInstance, triples: &[[usize; 3]]) -> Result<InterchangeSequence, ReduceError> {
    check_solution(inst, triples)?;
    let encoded = encode_3p(inst)?;
    let mut tags = Vec::new();
    tags.extend((0..=inst.n).map(Tag::A));
    for (i, &x) in inst.a.iter().enumerate() {
        tags.push(Tag::B);
        tags.extend(std::iter::repeat_n(Tag::C(i), x));
        tags.push(Tag::D(i));
    }
    tags.push(Tag::B);

    let len = tags.len();
    let mut word = encoded.v.clone();
    let mut sequence = InterchangeSequence::new(encoded.v.clone());
    for (g, t) in triples.iter().enumerate() {
        for (j, &index) in t.iter().enumerate() {
            let i = index - 1;
            let origin = tags.iter().position(|&x| x == Tag::A(0)).unwrap();
            let at = |pred: &dyn Fn(Tag) -> bool| -> Vec<usize> {
                (0..len).map(|p| (p + len - origin) % len).filter(|&p| pred(tags[(p + origin) % len])).collect()
            };
            let insert = if j == 0 {
                at(&|x| x == Tag::A(g))[0] + 1
            } else {
                let placed: Vec<usize> = t[..j].iter().map(|&k| k - 1).collect();
                *at(&|x| matches!(x, Tag::D(k) if placed.contains(&k))).iter().min().unwrap()
            };
            let span = at(&|x| x == Tag::C(i) || x == Tag::D(i));
            let (start, end) = (span[0], span[span.len() - 1] + 1);
            debug_assert!(insert < start && end - start == span.len());
            // rotate to the end of the block, then swap [insert, start) with the block
            let m = BlockInterchange::new((origin + end) % len, [len - end + insert, len - end + start, len - end + start]);
            let map = m.position_map(len)?;
            let mut next = tags.clone();
            for (p, &q) in map.iter().enumerate() {
                next[q] = tags[p];
            }
            tags = next;
            word = m.apply(&word)?;
            sequence.moves.push(m);
        }
    }
    if !verify_sequence(&encoded.v, &encoded.w, &sequence) {
        return Err(CbiError::Surgery(format!("decoded sequence ends at {word}, not a rotation of {}", encoded.w)).into());
    }
    Ok(sequence)
}

/// A solution by exhaustive search. Exponential; desk-scale instances only.
pub fn find_solution(inst: &ThreePartitionInstance) -> Result<Option<Vec<[usize; 3]>>, ReduceError> {
    inst.validate()?;
    fn rec(a: &[usize], target: usize, used: &mut [bool], out: &mut Vec<[usize; 3]>) -> bool {
        let Some(first) = used.iter().position(|&u| !u) else {
            return true;
        };
        used[first] = true;
        for j in first + 1..a.len() {
            for k in j + 1..a.len() {
                if !used[j] && !used[k] && a[first] + a[j] + a[k] == target {
                    used[j] = true;
                    used[k] = true;
                    out.push([first + 1, j + 1, k + 1]);
                    if rec(a, target, used, out) {
                        return true;
                    }
                    out.pop();
                    used[j] = false;
                    used[k] = false;
                }
            }
        }
        used[first] = false;
        false
    }
    let mut out = Vec::new();
    let found = rec(&inst.a, inst.target, &mut vec![false; inst.a.len()], &mut out);
    Ok(found.then_some(out))
}

/// A named 3-PARTITION instance, with a solution when one exists.
#[derive(Clone, Debug)]
pub struct ShippedInstance {
    pub name: &'static str,
    pub instance: ThreePartitionInstance,
    pub solution: Option<Vec<[usize; 3]>>,
}

/// The smallest instances satisfying the strict window, two solvable and
/// one not.
pub fn shipped_instances() -> Vec<ShippedInstance> {
    vec![
        ShippedInstance {
            name: "solvable-n1",
            instance: ThreePartitionInstance { n: 1, target: 12, a: vec![4, 4, 4] },
            solution: Some(vec![[1, 2, 3]]),
        },
        ShippedInstance {
            name: "solvable-n2",
            instance: ThreePartitionInstance { n: 2, target: 12, a: vec![4; 6] },
            solution: Some(vec![[1, 2, 3], [4, 5, 6]]),
        },
        ShippedInstance {
            name: "unsolvable-n2",
            instance: ThreePartitionInstance { n: 2, target: 16, a: vec![5, 5, 5, 5, 5, 7] },
            solution: None,
        },
    ]
}

/// Repetitions of each letter block in the binary encoding of a word of
/// length `n`.
pub fn lambda_repetitions(n: usize) -> usize {
    4 * n * n + 1
}

fn epsilon(l: Letter) -> Result<usize, ReduceError> {
    match (l.is_inverse(), l.generator()) {
        (false, g @ b'a'..=b'd') => Ok((g - b'a') as usize + 2),
        _ => Err(ReduceError::Alphabet(l)),
    }
}

fn lambda_block_lengths(v: &Word) -> Result<Vec<usize>, ReduceError> {
    let reps = lambda_repetitions(v.len());
    v.letters().iter().map(|&l| Ok(reps * (epsilon(l)? + 2))).collect()
}

/// Each letter `ℓ` of `v` becomes `(x y^{ε_ℓ} x)^{4n²+1}` with
/// `ε = 2, 3, 4, 5` for `a, b, c, d`.
pub fn lambda_encode(v: &Word) -> Result<Word, ReduceError> {
    let reps = lambda_repetitions(v.len());
    let mut out = Vec::new();
    for &l in v.letters() {
        let e = epsilon(l)?;
        for _ in 0..reps {
            repeat(&mut out, 'x', 1);
            repeat(&mut out, 'y', e);
            repeat(&mut out, 'x', 1);
        }
    }
    Ok(Word::from_letters(out))
}

/// The move on `λ(v)` that cuts at the encoded letter boundaries where `m`
/// cuts `v`.
pub fn lift_interchange(v: &Word, m: &BlockInterchange) -> Result<BlockInterchange, ReduceError> {
    m.check(v.len())?;
    let lengths = lambda_block_lengths(v)?;
    let offset = |k: usize| -> usize { lengths[..k].iter().sum() };
    let rotated = lengths[m.rotation.min(lengths.len())..].iter().chain(&lengths[..m.rotation.min(lengths.len())]);
    let mut prefix = vec![0];
    for &x in rotated {
        prefix.push(prefix.last().unwrap() + x);
    }
    let rotation = if v.is_empty() { 0 } else { offset(m.rotation) };
    Ok(BlockInterchange::new(rotation, m.cuts.map(|c| prefix[c])))
}

/// Lifts every move of `s` along its trajectory.
pub fn lift_sequence(s: &InterchangeSequence) -> Result<InterchangeSequence, ReduceError> {
    let mut lifted = InterchangeSequence::new(lambda_encode(&s.start)?);
    let mut current = s.start.clone();
    for m in &s.moves {
        lifted.moves.push(lift_interchange(&current, m)?);
        current = m.apply(&current)?;
    }
    Ok(lifted)
}

/// `v · w̃⁻¹` for every rotation `w̃` of `w`, left unreduced.
pub fn cbi_to_cl_single(v: &Word, w: &Word) -> Result<Vec<Word>, ReduceError> {
    if !is_related(v, w).map_err(CbiError::from)? {
        return Err(CbiError::NotRelated.into());
    }
    Ok((0..w.len()).map(|j| v.concat(&w.rotate(j).inverse())).collect())
}

/// The least commutator length over [`cbi_to_cl_single`], computed on the
/// unreduced words.
pub fn min_cl_single(v: &Word, w: &Word, options: &SearchOptions) -> Result<u32, ReduceError> {
    let words = cbi_to_cl_single(v, w)?;
    let values: Result<Vec<u32>, _> = words
        .par_iter()
        .map(|u| genus::cl_words(std::slice::from_ref(u), options).map(|c| c.genus))
        .collect();
    Ok(values.map_err(CbiError::from)?.into_iter().min().unwrap_or(0))
}

/// Can items of the given sizes fill `N` bins of capacity `B` exactly?
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EbpInstance {
    pub sizes: Vec<usize>,
    #[serde(rename = "N")]
    pub bins: usize,
    #[serde(rename = "B")]
    pub capacity: usize,
}

impl EbpInstance {
    pub fn validate(&self) -> Result<(), ReduceError> {
        let invalid = |m: String| Err(ReduceError::InvalidInstance(m));
        if self.sizes.is_empty() || self.sizes.contains(&0) {
            return invalid("sizes must be a nonempty list of positive integers".into());
        }
        if self.bins == 0 || self.capacity == 0 {
            return invalid("N and B must be positive".into());
        }
        let sum: usize = self.sizes.iter().sum();
        if sum != self.bins * self.capacity {
            return invalid(format!("sizes sum to {}, expected N·B = {}", sum, self.bins * self.capacity));
        }
        Ok(())
    }
}

/// `[a, bⁿ¹] + ⋯ + [a, bⁿᵏ] + [a^N, b^B]⁻¹`.
pub fn encode_ebp(inst: &EbpInstance) -> Result<Chain, ReduceError> {
    inst.validate()?;
    let (a, b) = (b'a', b'b');
    let mut terms: Vec<Word> =
        inst.sizes.iter().map(|&s| Word::commutator(&Word::power_of(a, 1), &Word::power_of(b, s as i64))).collect();
    let big = Word::commutator(&Word::power_of(a, inst.bins as i64), &Word::power_of(b, inst.capacity as i64));
    terms.push(big.inverse());
    Ok(Chain::new(terms))
}

/// Output of [`encode_ebp`] in its JSON form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EbpReduction {
    pub chain: Chain,
    pub k: u32,
}
