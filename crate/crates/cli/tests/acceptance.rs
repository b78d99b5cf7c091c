//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use clgenus::cbi::{self, BfsDistance, InterchangeSequence};
use clgenus::certify;
use clgenus::fi::{self, CommutatorFactorization};
use clgenus::genus::{self, GenusCertificate, IndexedChain, SearchOptions};
use clgenus::reduce::{self, EbpInstance};
use clgenus::words::is_cyclic_rotation;
use clgenus::{Chain, Letter, Word};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Outcome = Result<String, String>;

fn w(s: &str) -> Word {
    s.parse().unwrap()
}

fn ensure(ok: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(message())
    }
}

fn within(limit: Duration, started: Instant) -> Result<(), String> {
    ensure(started.elapsed() <= limit, || format!("took {:.1?}, limit {:?}", started.elapsed(), limit))
}

fn cl_chain(c: &Chain) -> u32 {
    genus::cl_chain_with(c, &SearchOptions::parallel()).unwrap().genus
}

fn cl_word(s: &Word) -> u32 {
    cl_chain(&Chain::single(s.clone()))
}

/// Every word over `{a, b}` of length `n`.
fn binary_words(n: usize) -> Vec<Word> {
    (0..1u32 << n)
        .map(|bits| Word::from_letters((0..n).map(|i| Letter::positive(if bits >> i & 1 == 1 { b'b' } else { b'a' })).collect()))
        .collect()
}

/// Every ordered pair of related words over `{a, b}` with length `1..=max`.
fn related_pairs(max: usize) -> Vec<(Word, Word)> {
    let mut out = Vec::new();
    for n in 1..=max {
        let words = binary_words(n);
        for v in &words {
            for u in &words {
                if v.letter_counts() == u.letter_counts() {
                    out.push((v.clone(), u.clone()));
                }
            }
        }
    }
    out
}

fn random_related(rng: &mut ChaCha8Rng, alphabet: &[u8], max: usize) -> (Word, Word) {
    let n = rng.gen_range(1..=max);
    let letters: Vec<Letter> = (0..n).map(|_| Letter::positive(alphabet[rng.gen_range(0..alphabet.len())])).collect();
    let mut shuffled = letters.clone();
    shuffled.shuffle(rng);
    (Word::from_letters(letters), Word::from_letters(shuffled))
}

/// A freely reduced boundary word over `{a, b}` of length at most `max`.
fn random_boundary(rng: &mut ChaCha8Rng, max: usize) -> Word {
    loop {
        let half = rng.gen_range(1..=max / 2);
        let x: Vec<Letter> = (0..half).map(|_| Letter::new(if rng.gen() { b'a' } else { b'b' }, rng.gen())).collect();
        let mut y: Vec<Letter> = x.iter().map(|l| l.inv()).collect();
        y.shuffle(rng);
        let mut all = x;
        all.extend(y);
        let word = Word::from_letters(all).free_reduce();
        if !word.is_empty() && word.len() <= max {
            return word;
        }
    }
}

fn criterion_1() -> Outcome {
    let started = Instant::now();
    let mut mismatches = Vec::new();
    for n in 1..=4 {
        let got = cl_word(&w(&"abAB".repeat(n)));
        let expected = ((n - 1) / 2 + 1) as u32;
        if got != expected {
            mismatches.push(format!("cl([a,b]^{n}) = {got}, expected {expected}"));
        }
    }
    for n in 1..=4 {
        let chain = Chain::new([w(&("a".repeat(n) + &"b".repeat(n))), w(&"ab".repeat(n)).inverse()]);
        let got = cl_chain(&chain);
        let expected = (n / 2) as u32;
        if got != expected {
            mismatches.push(format!("cl(a^{n}b^{n} + (ab)^-{n}) = {got}, expected {expected}"));
        }
    }
    within(Duration::from_secs(60), started)?;
    ensure(mismatches.is_empty(), || mismatches.join("; "))?;
    Ok("8 closed-form values".into())
}

fn criterion_2() -> Outcome {
    ensure(cbi::d_cbi(&w("ababab"), &w("aaabbb")).unwrap() == 1, || "d(ababab, aaabbb) != 1".into())?;
    for n in 1..=5 {
        let (v, t) = (w(&"ab".repeat(n)), w(&("a".repeat(n) + &"b".repeat(n))));
        let d = cbi::d_cbi_with(&v, &t, &SearchOptions::parallel()).unwrap();
        ensure(d as usize == n / 2, || format!("d((ab)^{n}, a^{n}b^{n}) = {d}, expected {}", n / 2))?;
    }
    Ok("6 distances".into())
}

fn criterion_3() -> Outcome {
    let started = Instant::now();
    let mut pairs = related_pairs(7);
    let exhaustive = pairs.len();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    pairs.extend((0..200).map(|_| random_related(&mut rng, b"ab", 10)));
    for (v, t) in &pairs {
        let d = cbi::d_cbi(v, t).unwrap() as usize;
        let oracle = cbi::oracle_bfs(v, t, None).unwrap();
        ensure(oracle == BfsDistance::Exact(d), || format!("{v} {t}: pairing {d}, oracle {oracle:?}"))?;
    }
    within(Duration::from_secs(600), started)?;
    Ok(format!("{exhaustive} exhaustive + 200 random pairs"))
}

fn criterion_4() -> Outcome {
    let pairs = related_pairs(6);
    for (v, t) in &pairs {
        let single = reduce::min_cl_single(v, t, &SearchOptions::default()).unwrap();
        let d = cbi::d_cbi(v, t).unwrap();
        ensure(single == d, || format!("{v} {t}: single-word {single}, distance {d}"))?;
    }
    Ok(format!("{} pairs", pairs.len()))
}

/// Cyclically reduced boundary words over `{a, b}` of length `1..=max`.
fn boundary_words(max: usize) -> Vec<Word> {
    let letters = [Letter::new(b'a', false), Letter::new(b'a', true), Letter::new(b'b', false), Letter::new(b'b', true)];
    let mut out = Vec::new();
    let mut frontier = vec![Vec::<Letter>::new()];
    for _ in 1..=max {
        let mut next = Vec::new();
        for prefix in &frontier {
            for &l in &letters {
                if prefix.last().is_some_and(|&p| p.is_inverse_of(l)) {
                    continue;
                }
                let mut grown = prefix.clone();
                grown.push(l);
                let word = Word::from_letters(grown.clone());
                if word.is_cyclically_reduced() && word.exponent_sums().values().all(|&s| s == 0) {
                    out.push(word);
                }
                next.push(grown);
            }
        }
        frontier = next;
    }
    out
}

fn criterion_5() -> Outcome {
    let words = boundary_words(10);
    for word in &words {
        let exact = cl_word(word);
        for k in 0..=2 {
            let decided = fi::decide_cl_leq(word, k).unwrap();
            ensure(decided == (exact <= k), || format!("{word}: decide(k={k}) = {decided}, genus {exact}"))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let word = random_boundary(&mut rng, 12);
        let f = fi::factorize(&word).unwrap();
        let exact = cl_word(&word);
        ensure(f.len() as u32 == exact, || format!("{word}: {} pairs, genus {exact}", f.len()))?;
        ensure(f.product() == word, || format!("{word}: product {}", f.product()))?;
    }
    Ok(format!("{} words x 3 thresholds, 100 factorizations", words.len()))
}

fn criterion_6() -> Outcome {
    let started = Instant::now();
    let report = certify::exhaustive_delta_check();
    within(Duration::from_secs(10), started)?;
    ensure(report.max_delta == 6, || format!("maxDelta = {}", report.max_delta))?;
    ensure(report.delta_six_cc_cuts == 0, || format!("deltaSixCcCuts = {}", report.delta_six_cc_cuts))?;
    ensure(report.cases_checked == 65536 + 4096, || format!("casesChecked = {}", report.cases_checked))?;
    Ok(format!("maxDelta 6, minDelta {}, 0 cc cuts, {} cases", report.min_delta, report.cases_checked))
}

fn criterion_7() -> Outcome {
    let mut solved = 0;
    for s in reduce::shipped_instances() {
        let n = s.instance.n;
        let out = reduce::encode_3p(&s.instance).unwrap();
        let gap = certify::nu_total(&out.v).unwrap() - certify::nu_total(&out.w).unwrap();
        ensure(gap == 18 * n as i64, || format!("{}: nu gap {gap}", s.name))?;
        let bound = certify::nu_lower_bound(&out.v, &out.w).unwrap() as usize;
        ensure(bound == 3 * n, || format!("{}: lower bound {bound}", s.name))?;
        match &s.solution {
            Some(solution) => {
                let seq = reduce::decode_3p_solution(&s.instance, solution).unwrap();
                ensure(seq.len() == 3 * n && cbi::verify_sequence(&out.v, &out.w, &seq), || {
                    format!("{}: decoded witness rejected", s.name)
                })?;
                solved += 1;
            }
            None => {
                let found = reduce::find_solution(&s.instance).unwrap();
                ensure(found.is_none(), || format!("{}: unexpectedly solvable", s.name))?;
            }
        }
    }
    ensure(solved == 2, || format!("{solved} solvable instances"))?;
    Ok("d = 3n pinned for n = 1, 2; unsolvable instance has the gap and no witness".into())
}

fn criterion_8() -> Outcome {
    let started = Instant::now();
    let yes = reduce::encode_ebp(&EbpInstance { sizes: vec![1, 2], bins: 1, capacity: 3 }).unwrap();
    let no = reduce::encode_ebp(&EbpInstance { sizes: vec![1, 3], bins: 2, capacity: 2 }).unwrap();
    let (gy, gn) = (cl_chain(&yes), cl_chain(&no));
    within(Duration::from_secs(60), started)?;
    ensure(gy == 0, || format!("solvable instance has genus {gy}"))?;
    ensure(gn >= 1, || format!("unsolvable instance has genus {gn}"))?;
    Ok(format!("genus {gy} and {gn}"))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut moves = 0;
    for _ in 0..50 {
        let (v, t) = random_related(&mut rng, b"abcd", 3);
        let s = cbi::extract_sequence(&v, &t).unwrap();
        let lifted = reduce::lift_sequence(&s).unwrap();
        let (lv, lt) = (reduce::lambda_encode(&v).unwrap(), reduce::lambda_encode(&t).unwrap());
        ensure(lifted.len() == s.len() && cbi::verify_sequence(&lv, &lt, &lifted), || format!("{v} {t}: lift rejected"))?;
        moves += s.len();
    }
    Ok(format!("50 pairs, {moves} lifted moves"))
}

fn run_cli(args: &[&str]) -> Value {
    let out = Command::new(env!("CARGO_BIN_EXE_clgenus")).arg("--json").args(args).output().unwrap();
    assert!(out.status.success(), "clgenus {args:?} exited with {:?}", out.status.code());
    serde_json::from_slice(&out.stdout).unwrap()
}

fn instance(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../instances").join(name).to_str().unwrap().to_string()
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut checks = 0;

    for _ in 0..60 {
        let word = random_boundary(&mut rng, 10);
        let base = cl_word(&word);
        let k = rng.gen_range(0..word.len());
        let g: Word = Word::from_letters((0..3).map(|_| Letter::new(if rng.gen() { b'a' } else { b'b' }, rng.gen())).collect());
        let conjugate = g.concat(&word).concat(&g.inverse()).free_reduce();
        ensure(cl_word(&word.rotate(k)) == base, || format!("{word}: rotation changes cl"))?;
        ensure(cl_word(&conjugate) == base, || format!("{word}: conjugation by {g} changes cl"))?;
        ensure(cl_word(&word.inverse()) == base, || format!("{word}: inversion changes cl"))?;
        checks += 3;
    }

    for _ in 0..60 {
        let (u, v) = random_related(&mut rng, b"abc", 7);
        let mut t = u.letters().to_vec();
        t.shuffle(&mut rng);
        let t = Word::from_letters(t);
        let (duv, dvt, dut) = (cbi::d_cbi(&u, &v).unwrap(), cbi::d_cbi(&v, &t).unwrap(), cbi::d_cbi(&u, &t).unwrap());
        ensure(duv == cbi::d_cbi(&v, &u).unwrap(), || format!("{u} {v}: not symmetric"))?;
        ensure((duv == 0) == is_cyclic_rotation(&u, &v), || format!("{u} {v}: zero iff rotation fails"))?;
        ensure(dut <= duv + dvt, || format!("{u} {v} {t}: triangle inequality fails"))?;
        ensure(cbi::d_cbi(&u.rotate(1), &v.rotate(2)).unwrap() == duv, || format!("{u} {v}: not rotation invariant"))?;
        checks += 4;
    }

    for _ in 0..40 {
        let word = random_boundary(&mut rng, 12);
        let chain = IndexedChain::new(&Chain::single(word.clone()));
        let found = genus::search(&chain, &SearchOptions::parallel()).unwrap();
        let integral = genus::genus_from_orbits(chain.len(), found.orbits, found.components, chain.term_count());
        ensure(integral == Some(found.genus), || format!("{word}: non-integral genus"))?;
        checks += 1;
    }

    let report = run_cli(&["cl", "abABabAB + aabbAABB", "--certificate"]);
    let cert: GenusCertificate = serde_json::from_value(report["certificate"]["pairing"].clone()).unwrap();
    let chain: Chain = "abABabAB + aabbAABB".parse().unwrap();
    ensure(genus::verify_certificate(&chain, &cert.pairing, cert.genus).is_accepted(), || "cl certificate rejected".into())?;

    let report = run_cli(&["cl", "aabbAABBabAB", "--factorize"]);
    let f: CommutatorFactorization = serde_json::from_value(report["certificate"]["factorization"].clone()).unwrap();
    ensure(f.product() == w("aabbAABBabAB"), || "factorization round trip fails".into())?;

    for (v, t) in [("aabbab", "ababba"), ("abcabc", "aabbcc"), ("abababab", "aaaabbbb")] {
        let report = run_cli(&["cbi", v, t, "--witness"]);
        let s: InterchangeSequence = serde_json::from_value(report["certificate"]["sequence"].clone()).unwrap();
        ensure(cbi::verify_sequence(&w(v), &w(t), &s), || format!("{v} {t}: witness round trip fails"))?;
    }

    let report = run_cli(&["reduce", "three-partition", &instance("three-partition-n2.json")]);
    let s: InterchangeSequence = serde_json::from_value(report["certificate"]["sequence"].clone()).unwrap();
    let (v, t) = (w(report["result"]["v"].as_str().unwrap()), w(report["result"]["w"].as_str().unwrap()));
    ensure(cbi::verify_sequence(&v, &t, &s), || "decoded witness round trip fails".into())?;
    checks += 6;

    Ok(format!("{checks} checks, 0 violations"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("closed-form commutator lengths", criterion_1),
        ("closed-form block-interchange distances", criterion_2),
        ("pairing distance equals breadth-first search", criterion_3),
        ("single-word reduction", criterion_4),
        ("interchange decision and factorization", criterion_5),
        ("exhaustive nu check", criterion_6),
        ("3-PARTITION pinning", criterion_7),
        ("exact bin packing reduction", criterion_8),
        ("binary-alphabet lifting", criterion_9),
        ("invariant suites and certificate round trips", criterion_10),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = BTreeSet::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let message = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into());
            Err(format!("panic: {message}"))
        });
        let elapsed = started.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({elapsed:.2?})", i + 1),
            Err(detail) => {
                println!("FAIL {:>2} {name}: {detail} ({elapsed:.2?})", i + 1);
                failed.insert(i + 1);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 10 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} of 10 criteria fail: {:?}", failed.len(), failed);
        ExitCode::FAILURE
    }
}
