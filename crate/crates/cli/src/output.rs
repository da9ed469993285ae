use std::fs;
use std::io::Write;
use std::path::Path;

use cantor_core::numeral::Evaluation;
use cantor_core::{rational, DigitString, Rational};
use serde_json::{json, Value};

use crate::Failure;

/// How rationals are printed.
#[derive(Debug, Clone, Copy)]
pub struct Format {
    pub digits: Option<usize>,
}

impl Format {
    pub fn num(&self, r: &Rational) -> String {
        match self.digits {
            Some(d) => rational::format_decimal(r, d),
            None => rational::format(r),
        }
    }

    pub fn value(&self, r: &Rational) -> Value {
        Value::String(self.num(r))
    }

    pub fn evaluation(&self, e: &Evaluation) -> Value {
        match e {
            Evaluation::Exact(v) => json!({ "value": self.num(v) }),
            Evaluation::Interval { lower, upper } => {
                json!({ "lower": self.num(lower), "upper": self.num(upper) })
            }
        }
    }
}

pub fn digit_string(d: &DigitString) -> Value {
    serde_json::to_value(d.to_repr()).expect("digit strings always serialize")
}

/// A CSV table with a header row and `\n` line endings.
pub fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn json_line(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("values always serialize");
    s.push('\n');
    s
}

/// Writes to the given file, or to standard output.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::usage(format!("cannot write output: {e}")))
        }
    }
}
