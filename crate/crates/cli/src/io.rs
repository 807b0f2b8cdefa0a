//! Payload input, output rendering and error classification.

use std::io::Read;

use cyclonic::Error;
use serde_json::Value;

use crate::{Opts, OutFormat};

pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotInvertible(_)
            | Error::OrderDependent { .. }
            | Error::NotWellDefined { .. } => 1,
            _ => 2,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Prefixes an error with the location it came from.
pub trait Located<T> {
    fn at(self, location: &str) -> CliResult<T>;
}

impl<T> Located<T> for cyclonic::Result<T> {
    fn at(self, location: &str) -> CliResult<T> {
        self.map_err(|e| {
            let mut c = CliError::from(e);
            c.message = format!("{location}: {}", c.message);
            c
        })
    }
}

pub enum Body {
    Json(Value),
    Csv(String),
}

pub struct Output {
    pub body: Body,
    pub passed: bool,
}

impl Output {
    pub fn json(v: Value) -> Self {
        Output {
            body: Body::Json(v),
            passed: true,
        }
    }

    pub fn verdict(v: Value, passed: bool) -> Self {
        Output {
            body: Body::Json(v),
            passed,
        }
    }

    pub fn render(&self) -> String {
        match &self.body {
            Body::Json(v) => format!(
                "{}\n",
                serde_json::to_string_pretty(v).expect("json values serialize")
            ),
            Body::Csv(s) => s.clone(),
        }
    }
}

/// Builds CSV from a header and rows; fields containing separators are quoted.
pub fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let quote = |f: &str| {
        if f.contains([',', '"', '\n']) {
            format!("\"{}\"", f.replace('"', "\"\""))
        } else {
            f.to_string()
        }
    };
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&r.iter().map(|f| quote(f)).collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    out
}

pub fn json_only(opts: &Opts, verb: &str) -> CliResult<()> {
    if opts.out == OutFormat::Csv {
        return Err(CliError::input(format!(
            "--out csv is not available for {verb}"
        )));
    }
    Ok(())
}

/// The payload from the positional argument, `--in`, or standard input.
pub fn payload(opts: &Opts) -> CliResult<Value> {
    let text = match (&opts.payload, &opts.input) {
        (Some(_), Some(_)) => {
            return Err(CliError::input(
                "give the payload inline or with --in, not both",
            ))
        }
        (Some(p), None) if p != "-" => p.clone(),
        (None, Some(path)) => std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?,
        _ => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| CliError::input(format!("cannot read standard input: {e}")))?;
            s
        }
    };
    serde_json::from_str(&text)
        .map_err(|e| CliError::input(format!("payload: malformed JSON: {e}")))
}

/// The payload if one was supplied, without touching standard input.
pub fn optional_payload(opts: &Opts) -> CliResult<Option<Value>> {
    if opts.payload.is_some() || opts.input.is_some() {
        payload(opts).map(Some)
    } else {
        Ok(None)
    }
}

/// A payload that must be an array of exactly `n` operands.
pub fn operands(opts: &Opts, n: usize) -> CliResult<Vec<Value>> {
    match payload(opts)? {
        Value::Array(v) if v.len() == n => Ok(v),
        other => Err(CliError::input(format!(
            "payload: expected an array of {n} operands, found {other}"
        ))),
    }
}

pub fn require(v: Option<u64>, flag: &str) -> CliResult<u64> {
    v.ok_or_else(|| CliError::input(format!("missing --{flag}")))
}
