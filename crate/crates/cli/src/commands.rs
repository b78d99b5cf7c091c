use std::fs;
use std::path::Path;

use clgenus::cbi::{self, BfsDistance};
use clgenus::certify::{self, NuWeights};
use clgenus::fi;
use clgenus::genus::{self, SearchOptions, Verification};
use clgenus::reduce::{self, EbpInstance, EbpReduction, ThreePartitionInstance};
use clgenus::words::is_related;
use clgenus::{Alphabet, Chain, Word};
use clap::ValueEnum;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::report::{Failure, EXIT_NOT_RELATED, EXIT_NU_VIOLATION};
use crate::{Command, ReduceKind};

pub struct Outcome {
    pub inputs: Value,
    pub result: Value,
    pub certificate: Option<Value>,
    /// Replaces the derived plain-text output.
    pub text: Option<String>,
    pub exit: u8,
}

impl Outcome {
    fn new(inputs: Value, result: Value) -> Self {
        Outcome { inputs, result, certificate: None, text: None, exit: 0 }
    }

    fn with_certificate(mut self, parts: Map<String, Value>) -> Self {
        if !parts.is_empty() {
            self.certificate = Some(Value::Object(parts));
        }
        self
    }
}

pub fn run(command: &Command, max_length: usize) -> Result<Outcome, Failure> {
    let options = SearchOptions { parallel: true, max_length: Some(max_length), target_genus: None };
    match command {
        Command::Cl { chain, certificate, factorize, decide } => {
            cmd_cl(chain, *certificate, *factorize, *decide, &options)
        }
        Command::Cbi { v, w, witness, oracle, lower_bound } => {
            cmd_cbi(v, w, *witness, *oracle, *lower_bound, &options)
        }
        Command::Reduce { kind, file } => cmd_reduce(*kind, file, &options),
        Command::VerifyNuLemma { weights } => cmd_verify_nu_lemma(weights.as_deref()),
        Command::OracleCbi { v, w, cap } => cmd_oracle(v, w, *cap),
    }
}

fn word(text: &str) -> Result<Word, Failure> {
    Ok(Word::parse(text.trim(), &Alphabet::latin())?)
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn cmd_cl(text: &str, certificate: bool, factorize: bool, decide: Option<u32>, options: &SearchOptions) -> Result<Outcome, Failure> {
    let chain = Chain::parse(text, &Alphabet::latin())?;
    let inputs = json!({ "chain": text, "certificate": certificate, "factorize": factorize, "decide": decide });
    let options = SearchOptions { target_genus: decide, ..options.clone() };
    let found = genus::search(&genus::IndexedChain::new(&chain), &options)?;
    let bound = decide.unwrap_or(found.genus);
    let mut parts = Map::new();
    if certificate && found.genus <= bound {
        let cert = found.certificate();
        if !matches!(genus::verify_certificate(&chain, &cert.pairing, bound), Verification::Accepted { .. }) {
            return Err(Failure::internal("pairing certificate failed verification"));
        }
        parts.insert("pairing".into(), to_value(&cert));
    }
    if factorize {
        if text.contains('+') {
            return Err(Failure::usage("--factorize needs a single word, not a chain"));
        }
        let w = word(text)?;
        let f = fi::factorize(&w)?;
        let exact = genus::cl_chain_with(&chain, &SearchOptions { target_genus: None, ..options.clone() })?.genus;
        if f.len() as u32 != exact || f.product() != w.free_reduce() {
            return Err(Failure::internal("factorization failed verification"));
        }
        parts.insert("factorization".into(), to_value(&f));
    }
    let result = match decide {
        Some(k) => json!(found.genus <= k),
        None => json!(found.genus),
    };
    Ok(Outcome::new(inputs, result).with_certificate(parts))
}

fn cmd_cbi(
    v: &str,
    w: &str,
    witness: bool,
    oracle: bool,
    lower_bound: bool,
    options: &SearchOptions,
) -> Result<Outcome, Failure> {
    let (vw, ww) = (word(v)?, word(w)?);
    let inputs = json!({ "v": v, "w": w, "witness": witness, "oracle": oracle, "lowerBound": lower_bound });
    let distance = cbi::d_cbi_with(&vw, &ww, options)?;
    let mut fields = Map::new();
    fields.insert("distance".into(), json!(distance));
    if oracle {
        match cbi::oracle_bfs(&vw, &ww, None)? {
            BfsDistance::Exact(d) if d == distance as usize => {
                fields.insert("oracle".into(), json!(d));
            }
            other => return Err(Failure::internal(format!("oracle disagrees: {other:?} vs {distance}"))),
        }
    }
    if lower_bound {
        fields.insert("lowerBound".into(), json!(certify::nu_lower_bound(&vw, &ww)?));
    }
    let mut parts = Map::new();
    if witness {
        let s = cbi::extract_sequence_with(&vw, &ww, options)?;
        if !cbi::verify_sequence(&vw, &ww, &s) || s.len() != distance as usize {
            return Err(Failure::internal("witness failed verification"));
        }
        parts.insert("sequence".into(), to_value(&s));
    }
    let result = if fields.len() == 1 { json!(distance) } else { Value::Object(fields) };
    Ok(Outcome::new(inputs, result).with_certificate(parts))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

#[derive(Deserialize)]
struct ThreePartitionFile {
    #[serde(flatten)]
    instance: ThreePartitionInstance,
    solution: Option<Vec<[usize; 3]>>,
}

#[derive(Deserialize)]
struct PairFile {
    v: Word,
    w: Option<Word>,
    k: Option<usize>,
}

fn related_pair(v: &Word, w: &Word) -> Result<(), Failure> {
    if !is_related(v, w)? {
        return Err(Failure::new(EXIT_NOT_RELATED, "words are not related"));
    }
    Ok(())
}

fn cmd_reduce(kind: ReduceKind, file: &Path, options: &SearchOptions) -> Result<Outcome, Failure> {
    let inputs = json!({ "kind": kind.to_possible_value().unwrap().get_name(), "file": file.display().to_string() });
    let mut parts = Map::new();
    let result = match kind {
        ReduceKind::ThreePartition => {
            let input: ThreePartitionFile = read_json(file)?;
            let out = reduce::encode_3p(&input.instance)?;
            if let Some(solution) = &input.solution {
                let s = reduce::decode_3p_solution(&input.instance, solution)?;
                if !cbi::verify_sequence(&out.v, &out.w, &s) || s.len() != out.k {
                    return Err(Failure::internal("decoded witness failed verification"));
                }
                parts.insert("sequence".into(), to_value(&s));
            }
            to_value(&out)
        }
        ReduceKind::Ebp => {
            let input: EbpInstance = read_json(file)?;
            to_value(&EbpReduction { chain: reduce::encode_ebp(&input)?, k: 0 })
        }
        ReduceKind::Binary => {
            let input: PairFile = read_json(file)?;
            let mut out = Map::new();
            out.insert("v".into(), to_value(&reduce::lambda_encode(&input.v)?));
            if let Some(w) = &input.w {
                related_pair(&input.v, w)?;
                out.insert("w".into(), to_value(&reduce::lambda_encode(w)?));
            }
            if let Some(k) = input.k {
                out.insert("k".into(), json!(k));
            }
            Value::Object(out)
        }
        ReduceKind::SingleCl => {
            let input: PairFile = read_json(file)?;
            let w = input.w.ok_or_else(|| Failure::usage("single-cl needs both \"v\" and \"w\""))?;
            let words = reduce::cbi_to_cl_single(&input.v, &w)?;
            let min = reduce::min_cl_single(&input.v, &w, options)?;
            json!({ "words": words, "minCl": min })
        }
    };
    Ok(Outcome::new(inputs, result).with_certificate(parts))
}

fn cmd_verify_nu_lemma(weights: Option<&str>) -> Result<Outcome, Failure> {
    let table = match weights {
        Some(text) => NuWeights(serde_json::from_str(text)?),
        None => NuWeights::STANDARD,
    };
    let report = certify::exhaustive_delta_check_with(&table);
    let result = to_value(&report);
    let mut outcome = Outcome::new(json!({ "customWeights": weights.is_some() }), result.clone());
    outcome.text = Some(format!("{}\n", serde_json::to_string_pretty(&result).unwrap()));
    if !report.holds() {
        outcome.exit = EXIT_NU_VIOLATION;
    }
    Ok(outcome)
}

fn cmd_oracle(v: &str, w: &str, cap: Option<usize>) -> Result<Outcome, Failure> {
    let (vw, ww) = (word(v)?, word(w)?);
    let inputs = json!({ "v": v, "w": w, "cap": cap });
    let result = match cbi::oracle_bfs(&vw, &ww, cap)? {
        BfsDistance::Exact(d) => json!(d),
        BfsDistance::Exceeded => json!("exceeded"),
    };
    Ok(Outcome::new(inputs, result))
}
