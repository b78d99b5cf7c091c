use std::fmt;

use clgenus::{CbiError, CertifyError, FiError, GenusError, ReduceError, WordError};
use serde::Serialize;
use serde_json::Value;

/// Exit codes.
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NOT_BOUNDARY: u8 = 3;
pub const EXIT_NOT_RELATED: u8 = 4;
pub const EXIT_SIZE_GUARD: u8 = 5;
pub const EXIT_INVALID_INSTANCE: u8 = 6;
pub const EXIT_NU_VIOLATION: u8 = 7;
pub const EXIT_INTERNAL: u8 = 1;

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Value>,
    pub elapsed_millis: u64,
}

impl RunReport {
    /// Plain-text rendering: the result, then the certificate as compact JSON.
    pub fn human(&self) -> String {
        let mut out = String::new();
        match &self.result {
            Value::Object(fields) => {
                for (k, v) in fields {
                    out.push_str(&format!("{k}: {}\n", scalar(v)));
                }
            }
            other => out.push_str(&format!("{}\n", scalar(other))),
        }
        if let Some(Value::Object(parts)) = &self.certificate {
            for (k, v) in parts {
                out.push_str(&format!("{k}: {v}\n"));
            }
        }
        out
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Bool(true) => "yes".into(),
        Value::Bool(false) => "no".into(),
        other => other.to_string(),
    }
}

/// An error together with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Failure::new(EXIT_USAGE, message)
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Failure::new(EXIT_INTERNAL, message)
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<WordError> for Failure {
    fn from(e: WordError) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<GenusError> for Failure {
    fn from(e: GenusError) -> Self {
        let code = match e {
            GenusError::NotBoundary { .. } => EXIT_NOT_BOUNDARY,
            GenusError::SizeGuard { .. } => EXIT_SIZE_GUARD,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<FiError> for Failure {
    fn from(e: FiError) -> Self {
        match e {
            FiError::Genus(g) => g.into(),
            other => Failure::usage(other.to_string()),
        }
    }
}

impl From<CbiError> for Failure {
    fn from(e: CbiError) -> Self {
        match e {
            CbiError::Word(w) => w.into(),
            CbiError::Genus(g) => g.into(),
            CbiError::NotRelated => Failure::new(EXIT_NOT_RELATED, e.to_string()),
            CbiError::SizeGuard { .. } => Failure::new(EXIT_SIZE_GUARD, e.to_string()),
            CbiError::OutOfBounds { .. } => Failure::usage(e.to_string()),
            CbiError::Surgery(_) => Failure::internal(e.to_string()),
        }
    }
}

impl From<CertifyError> for Failure {
    fn from(e: CertifyError) -> Self {
        match e {
            CertifyError::Alphabet(_) => Failure::usage(e.to_string()),
            CertifyError::NotRelated => Failure::new(EXIT_NOT_RELATED, e.to_string()),
        }
    }
}

impl From<ReduceError> for Failure {
    fn from(e: ReduceError) -> Self {
        match e {
            ReduceError::Cbi(c) => c.into(),
            ReduceError::Alphabet(_) => Failure::usage(e.to_string()),
            ReduceError::InvalidInstance(_) | ReduceError::NotASolution(_) => {
                Failure::new(EXIT_INVALID_INSTANCE, e.to_string())
            }
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::usage(format!("invalid JSON: {e}"))
    }
}
