//! Command-line front end: argument parsing, dispatch and report rendering.
//! The `clgenus` binary is a thin wrapper around [`execute`].

mod commands;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use report::{Failure, RunReport};

#[derive(Parser, Debug)]
#[command(name = "clgenus", version, about = "Exact commutator length and cyclic block-interchange distance")]
struct Cli {
    /// Print a machine-readable report instead of plain text.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads for the exact searches (default: all cores).
    #[arg(long, global = true, env = "CLGENUS_THREADS")]
    threads: Option<usize>,

    /// Refuse exact searches on chains longer than this.
    #[arg(long, global = true, default_value_t = 64)]
    max_length: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Commutator length of a chain such as "abAB" or "ab + BA".
    Cl {
        chain: String,
        /// Print the pairing that certifies the value.
        #[arg(long)]
        certificate: bool,
        /// Print an explicit product of commutators (single words only).
        #[arg(long)]
        factorize: bool,
        /// Only decide whether the commutator length is at most K.
        #[arg(long, value_name = "K")]
        decide: Option<u32>,
    },
    /// Cyclic block-interchange distance between two related positive words.
    Cbi {
        v: String,
        w: String,
        /// Print an optimal move sequence.
        #[arg(long)]
        witness: bool,
        /// Cross-check against breadth-first search (short words only).
        #[arg(long)]
        oracle: bool,
        /// Print the ν lower bound (words over a, b, c, d).
        #[arg(long)]
        lower_bound: bool,
    },
    /// Run a reduction on an instance file.
    Reduce { kind: ReduceKind, file: PathBuf },
    /// Exhaustively check the per-move bound on ν.
    VerifyNuLemma {
        /// 4x4 weight table as JSON, rows and columns a..d.
        #[arg(long, hide = true)]
        weights: Option<String>,
    },
    /// Block-interchange distance by breadth-first search.
    OracleCbi {
        v: String,
        w: String,
        /// Give up beyond this distance (default: the word length).
        #[arg(long)]
        cap: Option<usize>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ReduceKind {
    ThreePartition,
    Ebp,
    Binary,
    SingleCl,
}

/// What a run printed and how it exited.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Execution {
    pub stdout: String,
    pub stderr: String,
    pub code: u8,
}

/// Parses `args` (including the program name) and runs the command.
pub fn execute<I, T>(args: I) -> Execution
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code() as u8;
            return if e.use_stderr() {
                Execution { stdout: String::new(), stderr: text, code }
            } else {
                Execution { stdout: text, stderr: String::new(), code }
            };
        }
    };
    let name = command_name(&cli.command);
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(pool) => pool,
        Err(e) => return fail(name, cli.json, &Failure::usage(e.to_string())),
    };
    let started = Instant::now();
    match pool.install(|| commands::run(&cli.command, cli.max_length)) {
        Ok(outcome) => {
            let report = RunReport {
                command: name.to_string(),
                inputs: outcome.inputs,
                result: outcome.result,
                certificate: outcome.certificate,
                elapsed_millis: started.elapsed().as_millis() as u64,
            };
            let stdout = if cli.json {
                format!("{}\n", serde_json::to_string_pretty(&report).unwrap())
            } else if let Some(text) = outcome.text {
                text
            } else {
                report.human()
            };
            Execution { stdout, stderr: String::new(), code: outcome.exit }
        }
        Err(failure) => fail(name, cli.json, &failure),
    }
}

fn fail(name: &str, json: bool, failure: &Failure) -> Execution {
    let stdout = if json {
        let body = json!({ "command": name, "error": failure.message, "exitCode": failure.code });
        format!("{}\n", serde_json::to_string_pretty(&body).unwrap())
    } else {
        String::new()
    };
    Execution { stdout, stderr: format!("error: {failure}\n"), code: failure.code }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Cl { .. } => "cl",
        Command::Cbi { .. } => "cbi",
        Command::Reduce { .. } => "reduce",
        Command::VerifyNuLemma { .. } => "verify-nu-lemma",
        Command::OracleCbi { .. } => "oracle-cbi",
    }
}
