//! The cyclic 2-gram counter `ν` over `{a, b, c, d}` and the lower bounds it
//! gives on block-interchange distance.
//!
//! `ν` is a signed sum of cyclic 2-gram counts. A single block interchange
//! changes at most four adjacencies, and an exhaustive sweep over 2-letter
//! blocks shows that `ν` moves by at most 6, so `⌈|ν(v) − ν(w)| / 6⌉` is a
//! lower bound on the distance.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::CertifyError;
use crate::words::{Letter, Word};

const LETTERS: usize = 4;

fn index(l: Letter) -> Result<usize, CertifyError> {
    match (l.is_inverse(), l.generator()) {
        (false, g @ b'a'..=b'd') => Ok((g - b'a') as usize),
        _ => Err(CertifyError::Alphabet(l)),
    }
}

fn indices(w: &Word) -> Result<Vec<usize>, CertifyError> {
    w.letters().iter().map(|&l| index(l)).collect()
}

/// Cyclic 2-gram counts of a word over `{a, b, c, d}`; `counts[x][y]` is the
/// number of positions `i` with `w[i] = x` and `w[i + 1] = y`, indices taken
/// cyclically.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NuProfile {
    pub counts: [[usize; LETTERS]; LETTERS],
}

impl NuProfile {
    pub fn of(w: &Word) -> Result<Self, CertifyError> {
        Ok(Self::of_indices(&indices(w)?))
    }

    fn of_indices(w: &[usize]) -> Self {
        let mut counts = [[0; LETTERS]; LETTERS];
        for i in 0..w.len() {
            counts[w[i]][w[(i + 1) % w.len()]] += 1;
        }
        NuProfile { counts }
    }

    pub fn get(&self, x: Letter, y: Letter) -> Result<usize, CertifyError> {
        Ok(self.counts[index(x)?][index(y)?])
    }

    pub fn total(&self) -> usize {
        self.counts.iter().flatten().sum()
    }

    pub fn weighted(&self, weights: &NuWeights) -> i64 {
        let mut sum = 0;
        for x in 0..LETTERS {
            for y in 0..LETTERS {
                sum += weights.0[x][y] * self.counts[x][y] as i64;
            }
        }
        sum
    }
}

/// Coefficients of the 16 cyclic 2-gram counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NuWeights(pub [[i64; LETTERS]; LETTERS]);

impl NuWeights {
    /// `ν = aa + bc + cd + db − ac − cc − dd − da − bb`.
    pub const STANDARD: NuWeights = NuWeights([
        // a   b   c   d
        [1, 0, -1, 0],  // a
        [0, -1, 1, 0],  // b
        [0, 0, -1, 1],  // c
        [-1, 1, 0, -1], // d
    ]);

    fn value(&self, w: &[usize]) -> i64 {
        NuProfile::of_indices(w).weighted(self)
    }
}

impl Default for NuWeights {
    fn default() -> Self {
        NuWeights::STANDARD
    }
}

pub fn nu_xy(x: Letter, y: Letter, w: &Word) -> Result<usize, CertifyError> {
    NuProfile::of(w)?.get(x, y)
}

pub fn nu_total(w: &Word) -> Result<i64, CertifyError> {
    Ok(NuProfile::of(w)?.weighted(&NuWeights::STANDARD))
}

/// Outcome of [`exhaustive_delta_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DeltaReport {
    pub max_delta: i64,
    pub min_delta: i64,
    /// Cases with `Δ ≥ 6` in which some separated junction joins `c` to `c`.
    pub delta_six_cc_cuts: u64,
    pub cases_checked: u64,
}

impl DeltaReport {
    /// The per-move bound `|Δν| ≤ 6` with no `cc` run cut at the extreme.
    pub fn holds(&self) -> bool {
        self.max_delta <= 6 && self.min_delta >= -6 && self.delta_six_cc_cuts == 0
    }

    fn merge(self, other: DeltaReport) -> DeltaReport {
        DeltaReport {
            max_delta: self.max_delta.max(other.max_delta),
            min_delta: self.min_delta.min(other.min_delta),
            delta_six_cc_cuts: self.delta_six_cc_cuts + other.delta_six_cc_cuts,
            cases_checked: self.cases_checked + other.cases_checked,
        }
    }

    fn empty() -> DeltaReport {
        DeltaReport { max_delta: i64::MIN, min_delta: i64::MAX, delta_six_cc_cuts: 0, cases_checked: 0 }
    }
}

const C: usize = 2;
const BLOCKS: usize = LETTERS * LETTERS;

fn block(code: usize) -> [usize; 2] {
    [code / LETTERS, code % LETTERS]
}

/// Compares `blocks` in order against `blocks` permuted by `image`; every
/// cyclic junction of the original is separated by the move.
fn case(weights: &NuWeights, blocks: &[[usize; 2]], image: &[usize]) -> DeltaReport {
    let before: Vec<usize> = blocks.iter().flatten().copied().collect();
    let after: Vec<usize> = image.iter().flat_map(|&i| blocks[i]).collect();
    let delta = weights.value(&before) - weights.value(&after);
    let k = blocks.len();
    let cuts_cc = (0..k).any(|i| blocks[i][1] == C && blocks[(i + 1) % k][0] == C);
    DeltaReport {
        max_delta: delta,
        min_delta: delta,
        delta_six_cc_cuts: u64::from(delta >= 6 && cuts_cc),
        cases_checked: 1,
    }
}

/// Every `x₁x₂x₃x₄ ↦ x₁x₄x₃x₂` and every `z₁z₂z₃ ↦ z₁z₃z₂` with 2-letter
/// blocks over `{a, b, c, d}`.
pub fn exhaustive_delta_check() -> DeltaReport {
    exhaustive_delta_check_with(&NuWeights::STANDARD)
}

pub fn exhaustive_delta_check_with(weights: &NuWeights) -> DeltaReport {
    let four = (0..BLOCKS * BLOCKS)
        .into_par_iter()
        .map(|outer| {
            let mut report = DeltaReport::empty();
            for inner in 0..BLOCKS * BLOCKS {
                let blocks =
                    [block(outer / BLOCKS), block(outer % BLOCKS), block(inner / BLOCKS), block(inner % BLOCKS)];
                report = report.merge(case(weights, &blocks, &[0, 3, 2, 1]));
            }
            report
        })
        .reduce(DeltaReport::empty, DeltaReport::merge);
    let three = (0..BLOCKS * BLOCKS * BLOCKS)
        .into_par_iter()
        .map(|code| {
            let blocks = [block(code / (BLOCKS * BLOCKS)), block(code / BLOCKS % BLOCKS), block(code % BLOCKS)];
            case(weights, &blocks, &[0, 2, 1])
        })
        .reduce(DeltaReport::empty, DeltaReport::merge);
    four.merge(three)
}

/// `⌈|ν(v) − ν(w)| / 6⌉`.
pub fn nu_lower_bound(v: &Word, w: &Word) -> Result<u32, CertifyError> {
    let (nv, nw) = (nu_total(v)?, nu_total(w)?);
    if v.letter_counts() != w.letter_counts() {
        return Err(CertifyError::NotRelated);
    }
    Ok(((nv - nw).unsigned_abs().div_ceil(6)) as u32)
}
